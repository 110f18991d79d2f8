#pragma once

#include <stdexcept>
#include <string>

namespace tropref {

enum class Err {
    InvalidVector,
    NotBalanced,
    Degenerate,
    NotEven,
    NotConvex,
    NotSimple,
    NotElliptic,
    NoParity,
    ZeroSum,
    NotAdmissible,
    DegenerateWedge,
    GeneralPositionFailure,
    InternalInconsistency,
    DuplicateCurve,
    FragmentMismatch,
    DivisionByZero,
    NotASquare,
    ParseError,
    IoError,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const { return code_; }

  private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

}  // namespace tropref

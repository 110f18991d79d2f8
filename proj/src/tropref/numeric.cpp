#include "tropref/numeric.hpp"

#include "tropref/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace tropref {

const char* err_name(Err e) {
    switch (e) {
        case Err::InvalidVector: return "InvalidVector";
        case Err::NotBalanced: return "NotBalanced";
        case Err::Degenerate: return "Degenerate";
        case Err::NotEven: return "NotEven";
        case Err::NotConvex: return "NotConvex";
        case Err::NotSimple: return "NotSimple";
        case Err::NotElliptic: return "NotElliptic";
        case Err::NoParity: return "NoParity";
        case Err::ZeroSum: return "ZeroSum";
        case Err::NotAdmissible: return "NotAdmissible";
        case Err::DegenerateWedge: return "DegenerateWedge";
        case Err::GeneralPositionFailure: return "GeneralPositionFailure";
        case Err::InternalInconsistency: return "InternalInconsistency";
        case Err::DuplicateCurve: return "DuplicateCurve";
        case Err::FragmentMismatch: return "FragmentMismatch";
        case Err::DivisionByZero: return "DivisionByZero";
        case Err::NotASquare: return "NotASquare";
        case Err::ParseError: return "ParseError";
        case Err::IoError: return "IoError";
    }
    return "UnknownError";
}

Rat rat_from_string(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            return Rat(Int(s));
        }
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) fail(Err::ParseError, "zero denominator in '" + s + "'");
        return Rat(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(Err::ParseError, "bad rational '" + s + "'");
    }
}

std::string rat_to_string(const Rat& r) {
    Int num = numerator(r);
    Int den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

bool perfect_square(const Int& n, Int& root) {
    if (n < 0) return false;
    root = sqrt(n);
    return root * root == n;
}

}  // namespace tropref

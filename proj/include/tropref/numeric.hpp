#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace tropref {

// Exact arithmetic everywhere: arbitrary-precision integers and rationals.
// Expression templates are switched off so that `auto` never captures a
// dangling expression node.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

// Point of the plane with exact rational coordinates.
struct RatPoint {
    Rat x;
    Rat y;

    friend bool operator==(const RatPoint&, const RatPoint&) = default;
};

inline RatPoint operator+(const RatPoint& a, const RatPoint& b) { return {a.x + b.x, a.y + b.y}; }
inline RatPoint operator-(const RatPoint& a, const RatPoint& b) { return {a.x - b.x, a.y - b.y}; }
inline RatPoint operator*(const Rat& s, const RatPoint& p) { return {s * p.x, s * p.y}; }

inline bool lex_less(const RatPoint& a, const RatPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

// |p|^2, exact.
inline Rat norm2(const RatPoint& p) { return p.x * p.x + p.y * p.y; }

// "p/q" (or plain "p") parsing and printing; used by the JSON schemas.
Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);

// Exact integer square root test: returns true and sets root if n is a
// perfect square (n >= 0).
bool perfect_square(const Int& n, Int& root);

}  // namespace tropref

#pragma once

#include "tropref/errors.hpp"
#include "tropref/numeric.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace tropref {

// Integer-coefficient Laurent polynomial in q with exponents in (1/2)Z.
// Exponents are stored doubled, so a key of 4 means q^2 and a key of 1 means
// q^(1/2).  No zero coefficient is ever stored.
class LaurentPoly {
  public:
    LaurentPoly() = default;

    static LaurentPoly monomial(const Int& coeff, std::int64_t half_exponent);
    static LaurentPoly constant(const Int& coeff) { return monomial(coeff, 0); }

    bool is_zero() const { return terms_.empty(); }
    const std::map<std::int64_t, Int>& terms() const { return terms_; }
    Int coeff(std::int64_t half_exponent) const;

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

    // Exact value at a nonzero rational q0.  When a half-integer exponent is
    // present, q0 must be the square of a rational.
    Rat eval_at(const Rat& q0) const;

    // Descending exponents; see the text grammar in the repo docs.
    std::string to_canonical_string() const;
    static LaurentPoly parse(const std::string& text);

    // q^A - q^-A for a (doubled) exponent; the recurring triangle factor.
    static LaurentPoly area_factor(const Int& doubled_area);

  private:
    std::map<std::int64_t, Int> terms_;
    void prune(std::int64_t key);
};

}  // namespace tropref

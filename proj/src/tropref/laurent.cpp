#include "tropref/laurent.hpp"

#include <cctype>
#include <sstream>

namespace tropref {

void LaurentPoly::prune(std::int64_t key) {
    auto it = terms_.find(key);
    if (it != terms_.end() && it->second == 0) terms_.erase(it);
}

LaurentPoly LaurentPoly::monomial(const Int& coeff, std::int64_t half_exponent) {
    LaurentPoly p;
    if (coeff != 0) p.terms_[half_exponent] = coeff;
    return p;
}

Int LaurentPoly::coeff(std::int64_t half_exponent) const {
    auto it = terms_.find(half_exponent);
    return it == terms_.end() ? Int(0) : it->second;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.terms_) {
        r.terms_[e] += c;
        r.prune(e);
    }
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly r;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            r.terms_[e1 + e2] += c1 * c2;
            r.prune(e1 + e2);
        }
    return r;
}

namespace {

Rat rat_pow(const Rat& base, std::int64_t e) {
    if (e == 0) return Rat(1);
    bool neg = e < 0;
    std::uint64_t n = neg ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    Rat acc(1), b = base;
    while (n) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    if (neg) acc = Rat(1) / acc;
    return acc;
}

}  // namespace

Rat LaurentPoly::eval_at(const Rat& q0) const {
    if (q0 == 0) fail(Err::DivisionByZero, "Laurent polynomial evaluated at q = 0");
    bool needs_sqrt = false;
    for (const auto& [e, c] : terms_)
        if (e % 2 != 0) needs_sqrt = true;

    if (!needs_sqrt) {
        Rat acc(0);
        for (const auto& [e, c] : terms_) acc += Rat(c) * rat_pow(q0, e / 2);
        return acc;
    }
    if (q0 < 0) fail(Err::NotASquare, "negative q with half-integer exponents");
    Int num_root, den_root;
    if (!perfect_square(numerator(q0), num_root) || !perfect_square(denominator(q0), den_root))
        fail(Err::NotASquare, "q must be a perfect square of a rational here");
    Rat s(num_root, den_root);  // s = sqrt(q0), positive branch
    Rat acc(0);
    for (const auto& [e, c] : terms_) acc += Rat(c) * rat_pow(s, e);
    return acc;
}

namespace {

std::string exponent_string(std::int64_t h) {
    if (h % 2 == 0) return std::to_string(h / 2);
    return std::to_string(h) + "/2";
}

}  // namespace

std::string LaurentPoly::to_canonical_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [h, c] = *it;
        Int mag = abs(c);
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (h == 0) {
            out << mag.str();
        } else {
            if (mag != 1) out << mag.str() << "*";
            out << "q^" << exponent_string(h);
        }
    }
    return out.str();
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
    if (text == "0") return LaurentPoly();
    LaurentPoly result;
    size_t pos = 0;
    int sign = 1;
    if (pos < text.size() && text[pos] == '-') {
        sign = -1;
        ++pos;
    }
    while (pos < text.size()) {
        // term: [coeff '*'] 'q^' exp | coeff
        size_t term_end = text.find(' ', pos);
        std::string term = text.substr(pos, term_end == std::string::npos ? std::string::npos
                                                                          : term_end - pos);
        Int coeff = 1;
        std::int64_t half_exp = 0;
        auto qpos = term.find("q^");
        if (qpos == std::string::npos) {
            coeff = Int(term);
        } else {
            if (qpos > 0) {
                if (term[qpos - 1] != '*') fail(Err::ParseError, "expected '*' before q in '" + term + "'");
                coeff = Int(term.substr(0, qpos - 1));
            }
            std::string exp = term.substr(qpos + 2);
            auto slash = exp.find('/');
            try {
                if (slash == std::string::npos) {
                    half_exp = 2 * std::stoll(exp);
                } else {
                    if (exp.substr(slash + 1) != "2") fail(Err::ParseError, "only /2 exponents");
                    half_exp = std::stoll(exp.substr(0, slash));
                }
            } catch (const Error&) {
                throw;
            } catch (const std::exception&) {
                fail(Err::ParseError, "bad exponent in '" + term + "'");
            }
        }
        result += monomial(coeff * sign, half_exp);

        if (term_end == std::string::npos) break;
        pos = term_end;
        if (pos + 3 > text.size()) fail(Err::ParseError, "dangling separator");
        std::string sep = text.substr(pos, 3);
        if (sep == " + ")
            sign = 1;
        else if (sep == " - ")
            sign = -1;
        else
            fail(Err::ParseError, "bad separator '" + sep + "'");
        pos += 3;
    }
    return result;
}

LaurentPoly LaurentPoly::area_factor(const Int& doubled_area) {
    std::int64_t h = static_cast<std::int64_t>(doubled_area);
    return monomial(1, h) - monomial(1, -h);
}

}  // namespace tropref

#pragma once

#include <map>
#include <string>

#include "c2seq/mpoly.hpp"

namespace c2seq {

/// Rational function num/den over Rat coefficients.
///
/// Canonical form: den != 0, gcd(num, den) = 1, den monic under deg-lex.
/// Equality therefore reduces to representation equality.
class RatFunc {
public:
    RatFunc() : num_(), den_(Rat(1)) {}
    RatFunc(const Rat& r) : num_(r), den_(Rat(1)) {}
    RatFunc(long n) : num_(Rat(n)), den_(Rat(1)) {}
    RatFunc(const MPoly& p) : num_(p), den_(Rat(1)) {}
    RatFunc(MPoly num, MPoly den);

    static RatFunc var(const std::string& name) { return RatFunc(MPoly::var(name)); }

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == MPoly(Rat(1)) && is_polynomial_one_den(); }
    bool is_polynomial() const { return is_polynomial_one_den(); }
    /// Requires a polynomial value (den == 1).
    const MPoly& as_poly() const;
    bool is_constant() const { return num_.is_constant() && is_polynomial_one_den(); }
    Rat as_rat() const;

    RatFunc operator-() const;
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    /// Full evaluation; throws if the denominator vanishes at the point.
    Rat eval(const std::map<std::string, Rat>& assign) const;

    /// "(num) / (den)", or just the numerator form when den == 1.
    std::string str() const;

private:
    MPoly num_, den_;

    bool is_polynomial_one_den() const { return den_ == MPoly(Rat(1)); }
    void canonicalize();
};

}  // namespace c2seq

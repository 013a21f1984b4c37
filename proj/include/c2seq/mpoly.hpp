#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "c2seq/rat.hpp"

namespace c2seq {

/// Exponent vector, aligned with an MPoly's variable list.
using Monomial = std::vector<uint32_t>;

/// Degree-lexicographic order: total degree first, then lexicographic with
/// the first (alphabetically smallest) variable dominating.
struct DegLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned long da = 0, db = 0;
        for (auto e : a) da += e;
        for (auto e : b) db += e;
        if (da != db) return da < db;
        return a < b;
    }
};

/// Sparse multivariate polynomial over Rat.
///
/// Canonical form: variable names sorted and all used by at least one term,
/// no zero coefficients stored, terms ordered deg-lex. Two polynomials are
/// equal iff their canonical representations are identical.
class MPoly {
public:
    MPoly() = default;
    MPoly(const Rat& c) {
        if (!c.is_zero()) terms_[{}] = c;
    }
    MPoly(long c) : MPoly(Rat(c)) {}
    static MPoly var(const std::string& name, uint32_t exp = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return vars_.empty(); }
    /// Constant term (the coefficient of the empty monomial).
    Rat constant_term() const;
    /// Requires is_constant().
    Rat as_constant() const;

    const std::vector<std::string>& vars() const { return vars_; }
    const std::map<Monomial, Rat, DegLexLess>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    unsigned long total_degree() const;
    unsigned long degree_in(const std::string& var) const;
    /// Leading (deg-lex greatest) coefficient; 0 for the zero polynomial.
    Rat leading_coeff() const;

    MPoly operator-() const;
    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o);
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
    MPoly scaled(const Rat& c) const;
    MPoly pow(unsigned long e) const;

    friend bool operator==(const MPoly& a, const MPoly& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    /// Full evaluation; every variable must be assigned.
    Rat eval(const std::map<std::string, Rat>& assign) const;
    /// Substitutes polynomials for variables; unassigned variables remain.
    MPoly subst(const std::map<std::string, MPoly>& assign) const;

    /// Exact division; nullopt when the division leaves a remainder.
    std::optional<MPoly> divided_exactly_by(const MPoly& d) const;

    /// Canonical gcd: scalar-normalized so its deg-lex leading coefficient
    /// is 1 (gcd of two zeros is 0).
    static MPoly gcd(const MPoly& a, const MPoly& b);

    /// Coefficient of var^k, a polynomial in the remaining variables.
    MPoly coeff_of(const std::string& var, uint32_t k) const;

    /// "1 + 3*x + x^2" style, ascending deg-lex; "0" for zero.
    std::string str() const;

private:
    std::vector<std::string> vars_;
    std::map<Monomial, Rat, DegLexLess> terms_;

    void normalize();
    /// Re-expresses the polynomial over the given superset variable list.
    MPoly widened(const std::vector<std::string>& allvars) const;
    static std::vector<std::string> merged_vars(const MPoly& a, const MPoly& b);

    friend class MPolyUniv;
};

}  // namespace c2seq

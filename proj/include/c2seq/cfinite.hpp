#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "c2seq/ring.hpp"

namespace c2seq {

struct certification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct bounds_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Empirical zero-set description in Skolem-Mahler-Lech shape:
/// zeros = exceptional ∪ { n > n1 : n mod p ∈ residues }, matched exactly on
/// [0, horizon]. A bounded search result, not a proof.
struct ZeroPattern {
    std::set<size_t> exceptional;
    size_t n1 = 0;
    size_t p = 1;
    std::set<size_t> residues;
    size_t horizon = 0;
    static constexpr const char* proof_status = "empirical-horizon";
};

/// Sequence satisfying a_{n+s} = sum_{t<s} coeffs[t] * a_{n+t} for all
/// n >= valid_from, with stored terms a_0 .. a_{valid_from+s-1}.
/// Monic by construction; order 0 means identically zero (from valid_from).
/// Values are immutable; the term cache is internal and thread-safe.
template <class R>
class CFiniteSeq {
public:
    CFiniteSeq() : CFiniteSeq(std::vector<R>{}, std::vector<R>{}, 0) {}

    CFiniteSeq(std::vector<R> coeffs, std::vector<R> initials, size_t valid_from = 0) {
        if (initials.size() != valid_from + coeffs.size())
            throw std::invalid_argument("CFiniteSeq: initials must cover valid_from + order terms");
        auto d = std::make_shared<Data>();
        d->coeffs = std::move(coeffs);
        d->valid_from = valid_from;
        d->cache = std::move(initials);
        d_ = std::move(d);
    }

    static CFiniteSeq zero() { return CFiniteSeq(); }

    static CFiniteSeq constant(R c) { return CFiniteSeq({R(1)}, {std::move(c)}); }

    static CFiniteSeq fibonacci(R a0, R a1) {
        return CFiniteSeq({R(1), R(1)}, {std::move(a0), std::move(a1)});
    }

    /// Indicator of n ≡ i (mod p): order-p recurrence a_{n+p} = a_n.
    static CFiniteSeq indicator(size_t p, size_t i) {
        if (p < 1) throw std::invalid_argument("indicator: period must be >= 1");
        if (i >= p) throw std::invalid_argument("indicator: residue out of range");
        std::vector<R> coeffs(p, R(0));
        coeffs[0] = R(1);
        std::vector<R> init(p, R(0));
        init[i] = R(1);
        return CFiniteSeq(std::move(coeffs), std::move(init));
    }

    /// The polynomial sequence n^k (order k+1, roots all 1).
    static CFiniteSeq n_power(unsigned k) {
        std::vector<R> e = {R(1)};
        for (unsigned j = 0; j <= k; ++j) {  // (lambda-1)^(k+1)
            std::vector<R> nx(e.size() + 1, R(0));
            for (size_t t = 0; t < e.size(); ++t) {
                nx[t + 1] += e[t];
                nx[t] -= e[t];
            }
            e = std::move(nx);
        }
        std::vector<R> coeffs(e.size() - 1);
        for (size_t t = 0; t + 1 < e.size(); ++t) coeffs[t] = -e[t];
        std::vector<R> init;
        for (unsigned long n = 0; n <= k; ++n) {
            R v(1);
            for (unsigned j = 0; j < k; ++j) v *= R(long(n));
            init.push_back(std::move(v));
        }
        return CFiniteSeq(std::move(coeffs), std::move(init));
    }

    /// Monic recurrence built from characteristic polynomial coefficients
    /// e_0..e_s (e_s = 1) and enough leading terms.
    static CFiniteSeq from_char_poly(const std::vector<R>& e, std::vector<R> initials,
                                     size_t valid_from = 0) {
        if (e.empty() || !(e.back() - R(1)).is_zero())
            throw std::invalid_argument("from_char_poly: polynomial must be monic");
        std::vector<R> coeffs(e.size() - 1);
        for (size_t t = 0; t + 1 < e.size(); ++t) coeffs[t] = -e[t];
        return CFiniteSeq(std::move(coeffs), std::move(initials), valid_from);
    }

    size_t order() const { return d_->coeffs.size(); }
    size_t valid_from() const { return d_->valid_from; }
    const std::vector<R>& coeffs() const { return d_->coeffs; }
    std::vector<R> initials() const {
        std::lock_guard<std::mutex> lk(d_->mu);
        return std::vector<R>(d_->cache.begin(), d_->cache.begin() + long(initial_count()));
    }
    size_t initial_count() const { return d_->valid_from + d_->coeffs.size(); }

    /// Exact n-th term (memoized forward iteration).
    R term(size_t n) const {
        std::lock_guard<std::mutex> lk(d_->mu);
        extend_locked(n);
        return d_->cache[n];
    }

    std::vector<R> terms(size_t count) const { return terms(0, count); }

    std::vector<R> terms(size_t lo, size_t count) const {
        std::lock_guard<std::mutex> lk(d_->mu);
        if (count == 0) return {};
        extend_locked(lo + count - 1);
        return std::vector<R>(d_->cache.begin() + long(lo), d_->cache.begin() + long(lo + count));
    }

    /// Exact: true iff identically zero. Every term is a linear combination
    /// of the stored prefix, so the prefix decides.
    bool is_zero() const {
        std::lock_guard<std::mutex> lk(d_->mu);
        for (size_t i = 0; i < initial_count(); ++i)
            if (!d_->cache[i].is_zero()) return false;
        return true;
    }

    /// Representation equality (domain, order, coefficients, initials).
    friend bool operator==(const CFiniteSeq& a, const CFiniteSeq& b) {
        return a.d_->coeffs == b.d_->coeffs && a.d_->valid_from == b.d_->valid_from &&
               a.initials() == b.initials();
    }
    friend bool operator!=(const CFiniteSeq& a, const CFiniteSeq& b) { return !(a == b); }

    CFiniteSeq scaled(const R& c) const {
        if (c.is_zero()) return zero();
        auto init = initials();
        for (auto& x : init) x *= c;
        return CFiniteSeq(d_->coeffs, std::move(init), d_->valid_from);
    }

    CFiniteSeq negated() const { return scaled(R(-1)); }

    /// Companion matrix advancing the state (a_n, ..., a_{n+s-1}).
    Matrix<R> companion() const {
        size_t s = order();
        Matrix<R> c(s, s);
        for (size_t i = 0; i + 1 < s; ++i) c(i, i + 1) = R(1);
        for (size_t t = 0; t < s; ++t) c(s - 1, t) = d_->coeffs[t];
        return c;
    }

    /// Closure under addition: recurrence from the product of
    /// characteristic polynomials, order <= s_a + s_b.
    CFiniteSeq add(const CFiniteSeq& o) const {
        auto e = poly_mul(char_poly_vec(), o.char_poly_vec());
        size_t v = std::max(valid_from(), o.valid_from());
        size_t s = e.size() - 1;
        std::vector<R> init;
        init.reserve(v + s);
        auto ta = terms(v + s), tb = o.terms(v + s);
        for (size_t i = 0; i < v + s; ++i) init.push_back(ta[i] + tb[i]);
        return from_char_poly(e, std::move(init), v);
    }

    CFiniteSeq sub(const CFiniteSeq& o) const { return add(o.negated()); }

    /// Closure under multiplication, order <= s_a * s_b. Small products go
    /// through the characteristic polynomial of the Kronecker product of
    /// companion matrices; larger ones fit the recurrence from terms and
    /// certify it exactly against the s_a*s_b order bound.
    CFiniteSeq mul(const CFiniteSeq& o) const {
        size_t bound = order() * o.order();
        size_t v = std::max(valid_from(), o.valid_from());
        if (bound == 0 || is_zero() || o.is_zero()) return zero();
        if (bound <= 16) {
            auto e = char_poly(kron(companion(), o.companion()));
            std::vector<R> init;
            auto ta = terms(v + bound), tb = o.terms(v + bound);
            for (size_t i = 0; i < v + bound; ++i) init.push_back(ta[i] * tb[i]);
            return from_char_poly(e, std::move(init), v);
        }
        size_t need = v + 2 * bound + 2;
        auto ta = terms(need), tb = o.terms(need);
        std::vector<R> prod(need);
        for (size_t i = 0; i < need; ++i) prod[i] = ta[i] * tb[i];
        auto fitted = fit_with_order_bound(prod, v, bound);
        if (!fitted)
            throw certification_error("cf_mul: no recurrence within the closure order bound");
        return *fitted;
    }

    /// Sub-sequence n -> a_{t n + r}, via the characteristic polynomial of
    /// the t-th power of the companion matrix.
    CFiniteSeq subseq(size_t t, size_t r) const {
        if (t == 0) throw std::invalid_argument("cf_subseq: stride must be >= 1");
        size_t s = order();
        if (s == 0) return zero();
        auto e = char_poly(mat_pow(companion(), t));
        size_t v = 0;
        if (valid_from() > r) v = (valid_from() - r + t - 1) / t;
        std::vector<R> init;
        init.reserve(v + s);
        for (size_t n = 0; n < v + s; ++n) init.push_back(term(t * n + r));
        return from_char_poly(e, std::move(init), v);
    }

    CFiniteSeq shifted(size_t k) const { return subseq(1, k); }

    /// Minimal-order recurrence consistent with terms 0..window, certified
    /// exactly against this sequence's own recurrence. Returns *this when
    /// already minimal.
    CFiniteSeq minimize(size_t window = 0) const {
        size_t s = order();
        if (window == 0) window = 2 * s + 2 + valid_from();
        if (window < 2 * s + 2)
            throw std::invalid_argument("cf_minimize: window must be >= 2*order + 2");
        if (is_zero()) return zero();
        size_t v = valid_from();
        auto ts = terms(std::max(window + 1, v + 2 * s + 2));
        auto fitted = fit_with_order_bound(ts, v, s);
        if (!fitted)
            throw certification_error("cf_minimize: certification failed");
        if (fitted->order() == s) return *this;
        return *fitted;
    }

    /// Bounded empirical search for the Skolem-Mahler-Lech shape of the
    /// zero set; throws bounds_error when nothing fits within the bounds.
    ZeroPattern zero_pattern(size_t n1_max, size_t p_max, size_t horizon) const {
        if (horizon < n1_max + 2 * p_max)
            throw std::invalid_argument("cf_zero_pattern: horizon must be >= n1_max + 2*p_max");
        auto ts = terms(horizon + 1);
        std::vector<bool> isz(horizon + 1);
        for (size_t n = 0; n <= horizon; ++n) isz[n] = ts[n].is_zero();
        for (size_t n1 = 0; n1 <= n1_max; ++n1)
            for (size_t p = 1; p <= p_max; ++p) {
                std::set<size_t> residues;
                for (size_t i = 0; i < p; ++i) {
                    bool all = true;
                    for (size_t n = n1 + 1; n <= horizon; ++n)
                        if (n % p == i && !isz[n]) {
                            all = false;
                            break;
                        }
                    if (all) residues.insert(i);
                }
                bool covered = true;
                for (size_t n = n1 + 1; n <= horizon && covered; ++n)
                    if (isz[n] && !residues.count(n % p)) covered = false;
                if (!covered) continue;
                ZeroPattern zp;
                zp.n1 = n1;
                zp.p = p;
                zp.residues = std::move(residues);
                zp.horizon = horizon;
                for (size_t n = 0; n <= std::min(n1, horizon); ++n)
                    if (isz[n]) zp.exceptional.insert(n);
                return zp;
            }
        throw bounds_error("cf_zero_pattern: no pattern within (n1_max, p_max); raise bounds");
    }

    /// Monic characteristic polynomial lambda^s - sum coeffs[t] lambda^t.
    std::vector<R> char_poly_vec() const {
        std::vector<R> e(order() + 1, R(0));
        e[order()] = R(1);
        for (size_t t = 0; t < order(); ++t) e[t] = -d_->coeffs[t];
        return e;
    }

private:
    struct Data {
        std::vector<R> coeffs;
        size_t valid_from = 0;
        mutable std::mutex mu;
        mutable std::vector<R> cache;  // cache[0..] = terms; prefix = initials
    };
    std::shared_ptr<const Data> d_;

    void extend_locked(size_t n) const {
        auto& cache = d_->cache;
        size_t s = d_->coeffs.size();
        if (s == 0) {
            while (cache.size() <= n) cache.push_back(R(0));
            return;
        }
        while (cache.size() <= n) {
            size_t m = cache.size() - s;  // relation index
            R acc(0);
            for (size_t t = 0; t < s; ++t) {
                if (d_->coeffs[t].is_zero()) continue;
                acc += d_->coeffs[t] * cache[m + t];
            }
            cache.push_back(std::move(acc));
        }
    }

    static std::vector<R> poly_mul(const std::vector<R>& a, const std::vector<R>& b) {
        std::vector<R> c(a.size() + b.size() - 1, R(0));
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
        }
        return c;
    }

    /// Finds the minimal monic recurrence matching `ts` from index v on,
    /// given that some monic recurrence of order <= bound annihilates the
    /// sequence from v. Any candidate whose residual vanishes on `bound`
    /// consecutive indices from v is exact, because the residual itself
    /// satisfies that unknown order-bound recurrence.
    static std::optional<CFiniteSeq> fit_with_order_bound(const std::vector<R>& ts, size_t v,
                                                          size_t bound) {
        auto attempt = [&](size_t r) -> std::optional<std::vector<R>> {
            size_t neq = ts.size() - v >= r ? ts.size() - v - r : 0;
            if (neq < bound) return std::nullopt;  // not enough terms supplied
            return detail_fit::fit_order(ts, v, r, neq);
        };
        // Exponential probe plus binary refinement; matching is monotone in
        // the order since a relation can be re-used one index later.
        std::vector<size_t> probes;
        for (size_t r = 0; r <= bound; r = (r == 0 ? 1 : r * 2)) probes.push_back(r);
        if (probes.empty() || probes.back() != bound) probes.push_back(bound);
        size_t lo = 0, hi = size_t(-1);
        std::optional<std::vector<R>> best;
        for (size_t r : probes) {
            auto sol = attempt(r);
            if (sol) {
                hi = r;
                best = std::move(sol);
                break;
            }
            lo = r + 1;
        }
        if (hi == size_t(-1)) return std::nullopt;
        while (lo < hi) {
            size_t mid = lo + (hi - lo) / 2;
            auto sol = attempt(mid);
            if (sol) {
                hi = mid;
                best = std::move(sol);
            } else {
                lo = mid + 1;
            }
        }
        size_t r = hi;
        // Pull valid_from down while the relation keeps holding.
        size_t vv = v;
        while (vv > 0) {
            R acc(0);
            for (size_t t = 0; t < r; ++t) acc += (*best)[t] * ts[vv - 1 + t];
            if (!(acc - ts[vv - 1 + r]).is_zero()) break;
            --vv;
        }
        std::vector<R> init(ts.begin(), ts.begin() + long(vv + r));
        return CFiniteSeq(*best, std::move(init), vv);
    }

public:
    struct detail_fit {
        /// Solves for order-r coefficients on a short window, then verifies
        /// every available equation; falls back to the full system when the
        /// short solve picked a spurious member of the solution space.
        static std::optional<std::vector<R>> fit_order(const std::vector<R>& ts, size_t v,
                                                       size_t r, size_t neq) {
            auto build = [&](size_t rows) {
                Matrix<R> a(rows, r);
                std::vector<R> rhs(rows);
                for (size_t e = 0; e < rows; ++e) {
                    for (size_t t = 0; t < r; ++t) a(e, t) = ts[v + e + t];
                    rhs[e] = ts[v + e + r];
                }
                return std::make_pair(std::move(a), std::move(rhs));
            };
            auto verify = [&](const std::vector<R>& x) {
                for (size_t e = 0; e < neq; ++e) {
                    R acc(0);
                    for (size_t t = 0; t < r; ++t) acc += x[t] * ts[v + e + t];
                    if (!(acc - ts[v + e + r]).is_zero()) return false;
                }
                return true;
            };
            if (r == 0) {
                std::vector<R> empty;
                return verify(empty) ? std::optional<std::vector<R>>(std::move(empty))
                                     : std::nullopt;
            }
            // Fraction-free square solve on the leading Hankel block first.
            if (neq >= r) {
                auto [a, rhs] = build(r);
                auto bj = bareiss_jordan_solve(a, rhs);
                if (bj) {
                    auto& [det, y] = *bj;
                    std::vector<R> x(r);
                    for (size_t t = 0; t < r; ++t) x[t] = y[t] / det;
                    if (verify(x)) return x;
                    return std::nullopt;  // unique solution failed: no fit at r
                }
            }
            // Singular leading block: fall back to field elimination, which
            // also handles a consistent non-unique solution space.
            size_t small = std::min(neq, r + 2);
            auto [a, rhs] = build(small);
            auto sol = solve_linear(a, rhs);
            if (sol && verify(*sol)) return sol;
            if (small == neq) return std::nullopt;
            auto [fa, frhs] = build(neq);
            auto full = solve_linear(fa, frhs);
            if (full && verify(*full)) return full;
            return std::nullopt;
        }
    };
};

/// Fits a minimal-order recurrence to raw samples (no external order bound:
/// the result is only as certain as the sample window). Used where a later
/// global certification step covers the outcome. Probes orders
/// exponentially and refines by binary search; matching is monotone in the
/// order because a valid relation can always be re-used one index later.
template <class R>
std::optional<CFiniteSeq<R>> fit_cfinite_samples(const std::vector<R>& ts, size_t valid_from,
                                                 size_t max_order) {
    auto attempt = [&](size_t r) -> std::optional<std::vector<R>> {
        if (ts.size() < valid_from + 2 * r + 1) return std::nullopt;
        size_t neq = ts.size() - valid_from - r;
        return CFiniteSeq<R>::detail_fit::fit_order(ts, valid_from, r, neq);
    };
    std::vector<size_t> probes;
    for (size_t r = 0; r <= max_order; r = (r == 0 ? 1 : r * 2)) probes.push_back(r);
    if (probes.empty() || probes.back() != max_order) probes.push_back(max_order);
    size_t lo = 0, hi = size_t(-1);
    std::optional<std::vector<R>> best;
    for (size_t r : probes) {
        auto sol = attempt(r);
        if (sol) {
            hi = r;
            best = std::move(sol);
            break;
        }
        lo = r + 1;
    }
    if (hi == size_t(-1)) return std::nullopt;
    while (lo < hi) {
        size_t mid = lo + (hi - lo) / 2;
        auto sol = attempt(mid);
        if (sol) {
            hi = mid;
            best = std::move(sol);
        } else {
            lo = mid + 1;
        }
    }
    std::vector<R> init(ts.begin(), ts.begin() + long(valid_from + hi));
    return CFiniteSeq<R>(*best, std::move(init), valid_from);
}

}  // namespace c2seq

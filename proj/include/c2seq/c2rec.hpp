#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "c2seq/cfmatrix.hpp"

namespace c2seq {

/// Bounds for the empirical part of recurrence extraction: the search window
/// for eventual periodicity of the rank thresholds, and the certification
/// length. The effective horizon is raised automatically when the stated one
/// cannot cover n1_max + 2*p_max + order^2 indices.
struct ExtractionParams {
    size_t n1_max = 8;
    size_t p_max = 6;
    size_t horizon = 64;
};

/// Linear recurrence with C-finite coefficient sequences:
///   q[r](n) * b_{n+r} = sum_{t<r} q[t](n) * b_{n+t}   for n >= valid_from,
/// with stored terms b_0 .. b_{valid_from+r-1}. The relation and the
/// nonvanishing of the leading coefficient are checked exactly up to
/// certified_horizon; beyond that the object is certified, not proven.
template <class R>
class C2Recurrence {
public:
    static constexpr const char* proof_status = "certified-horizon";

    C2Recurrence(std::vector<CFiniteSeq<R>> coeff_seqs, size_t valid_from,
                 std::vector<R> initials, size_t certified_horizon)
        : coeffs_(std::move(coeff_seqs)),
          valid_from_(valid_from),
          initials_(std::move(initials)),
          horizon_(certified_horizon) {
        if (coeffs_.empty()) throw std::invalid_argument("C2Recurrence: no coefficients");
        if (initials_.size() != valid_from_ + order())
            throw std::invalid_argument("C2Recurrence: initials must cover valid_from + order");
    }

    size_t order() const { return coeffs_.size() - 1; }
    const std::vector<CFiniteSeq<R>>& coeff_seqs() const { return coeffs_; }
    const CFiniteSeq<R>& coeff(size_t t) const { return coeffs_[t]; }
    const CFiniteSeq<R>& leading_coeff() const { return coeffs_.back(); }
    size_t valid_from() const { return valid_from_; }
    const std::vector<R>& initials() const { return initials_; }
    size_t certified_horizon() const { return horizon_; }

    /// Terms b_0..b_{count-1}, generated through the relation.
    std::vector<R> terms(size_t count) const {
        std::vector<R> b(initials_.begin(), initials_.end());
        size_t r = order();
        while (b.size() < count) {
            size_t n = b.size() - r;
            R lead = coeffs_[r].term(n);
            if (lead.is_zero())
                throw certification_error("C2Recurrence: leading coefficient vanishes at n=" +
                                          std::to_string(n));
            R acc(0);
            for (size_t t = 0; t < r; ++t) acc += coeffs_[t].term(n) * b[n + t];
            b.push_back(acc / lead);
        }
        b.resize(count);
        return b;
    }

    R term(size_t n) const { return terms(n + 1)[n]; }

    /// Same sequence as an order-(r+1) relation (the order-r relation shifted
    /// one step), used to equalize orders before closure constructions.
    C2Recurrence padded() const {
        size_t r = order();
        std::vector<CFiniteSeq<R>> nc;
        nc.push_back(CFiniteSeq<R>::zero());
        for (const auto& q : coeffs_) nc.push_back(q.shifted(1));
        std::vector<R> init = terms(valid_from_ + r + 1);
        return C2Recurrence(std::move(nc), valid_from_, std::move(init),
                            horizon_ > 0 ? horizon_ - 1 : 0);
    }

private:
    std::vector<CFiniteSeq<R>> coeffs_;
    size_t valid_from_;
    std::vector<R> initials_;
    size_t horizon_;
};

struct VerifyReport {
    bool ok = false;
    bool vacuous = false;
    std::optional<size_t> first_violation;
    std::optional<size_t> leading_zero_at;
    std::string detail;
};

/// Checks the relation of `rec` against an independent oracle on
/// [valid_from, upto], and re-checks that the leading coefficient never
/// vanishes there. Violations are report content, not errors.
template <class R>
VerifyReport c2_verify(const C2Recurrence<R>& rec, const std::function<R(size_t)>& oracle,
                       size_t upto) {
    VerifyReport rep;
    size_t r = rec.order();
    if (upto < rec.valid_from()) {
        rep.ok = true;
        rep.vacuous = true;
        rep.detail = "upto below valid_from; nothing checked";
        return rep;
    }
    std::vector<R> b;
    for (size_t n = 0; n <= upto + r; ++n) b.push_back(oracle(n));
    for (size_t n = rec.valid_from(); n <= upto; ++n) {
        R lead = rec.coeff(r).term(n);
        if (lead.is_zero()) {
            rep.leading_zero_at = n;
            rep.detail = "leading coefficient vanishes at n=" + std::to_string(n);
            return rep;
        }
        R acc(0);
        for (size_t t = 0; t < r; ++t) acc += rec.coeff(t).term(n) * b[n + t];
        if (!(acc - lead * b[n + r]).is_zero()) {
            rep.first_violation = n;
            rep.detail = "relation violated at n=" + std::to_string(n);
            return rep;
        }
    }
    rep.ok = true;
    return rep;
}

namespace detail {

struct RankThreshold {
    size_t t_indep;                  // first column of the independent suffix
    std::vector<size_t> pivot_rows;  // one pivot row per suffix column, ascending t
};

/// Rank threshold s_n for one index: the minimal t such that the vectorized
/// products N^{(t)}..N^{(L-1)} are independent and N^{(L)} lies in their
/// span; nullopt when no threshold is solvable at this index. Columns are
/// added right to left against an incrementally reduced basis; the
/// elimination cross-multiplies instead of dividing, which keeps integral
/// domains integral (no gcd-heavy fraction normalization).
template <class R>
std::optional<RankThreshold> rank_threshold(const std::vector<std::vector<R>>& ncols) {
    size_t ell = ncols.size() - 1;
    size_t dim = ell == 0 ? 0 : ncols[0].size();
    std::vector<std::pair<size_t, std::vector<R>>> basis;  // (pivot row, reduced column)
    auto reduce = [&](std::vector<R> v) {
        for (const auto& [pr, bv] : basis) {
            if (v[pr].is_zero()) continue;
            R f = v[pr];
            for (size_t i = 0; i < dim; ++i) {
                v[i] = v[i] * bv[pr] - (bv[i].is_zero() ? R(0) : f * bv[i]);
            }
        }
        return v;
    };
    size_t t_indep = ell;
    std::vector<size_t> pivots_rev;
    for (size_t t = ell; t-- > 0;) {
        auto v = reduce(ncols[t]);
        size_t pr = 0;
        while (pr < dim && v[pr].is_zero()) ++pr;
        if (pr == dim) break;  // adding this column loses independence
        basis.emplace_back(pr, std::move(v));
        pivots_rev.push_back(pr);
        t_indep = t;
    }
    auto res = reduce(ncols[ell]);
    for (const auto& x : res)
        if (!x.is_zero()) return std::nullopt;
    RankThreshold out;
    out.t_indep = t_indep;
    out.pivot_rows.assign(pivots_rev.rbegin(), pivots_rev.rend());
    return out;
}

/// Zero-padded lift of a per-class sequence onto the global index: the value
/// at n = start + p*m is g_m, zero off the class. The lifted recurrence is
/// the class recurrence with stride p (char poly chi_g(lambda^p)).
template <class R>
CFiniteSeq<R> lift_to_residue_class(const CFiniteSeq<R>& g, size_t p, size_t start) {
    auto eg = g.char_poly_vec();
    size_t sg = eg.size() - 1;
    std::vector<R> lifted_e(sg * p + 1, R(0));
    for (size_t t = 0; t <= sg; ++t) lifted_e[t * p] = eg[t];
    size_t order = sg * p;
    std::vector<R> init(start + order, R(0));
    for (size_t n = start, m = 0; n < init.size(); n += p, ++m) init[n] = g.term(m);
    return CFiniteSeq<R>::from_char_poly(lifted_e, std::move(init), start);
}

}  // namespace detail

/// The extraction algorithm: given the vector recurrence
///   v_{n+1} = (1/w_n) M_n v_n,
/// produces an order r^2 recurrence with C-finite coefficients satisfied by
/// every component of v_n (and hence every fixed linear functional of it).
///
/// Rank thresholds are scanned per index, their eventual periodicity is
/// detected within (n1_max, p_max), per-class coefficient values come from
/// exact Gram solves (det and adjugate of N^T N), and the per-class value
/// streams are refit as C-finite sequences and stitched across residue
/// classes. The assembled relation is certified exactly on the horizon
/// against the directly iterated vectors, componentwise.
template <class R>
C2Recurrence<R> extract_recurrence(const CFMatrixSeq<R>& m, const CFiniteSeq<R>& w,
                                   const std::vector<R>& v0, const ExtractionParams& params = {},
                                   std::vector<R> functional = {}) {
    if (!m.is_square() || m.rows() == 0)
        throw std::invalid_argument("extract_recurrence: matrix must be square and nonempty");
    size_t r = m.rows();
    if (v0.size() != r) throw std::invalid_argument("extract_recurrence: v0 size mismatch");
    size_t rr2 = r * r;
    size_t horizon = std::max(params.horizon, params.n1_max + 2 * params.p_max + rr2 + 8);
    size_t top = horizon + rr2 + 1;

    if (functional.empty()) {
        functional.assign(r, R(0));
        functional[0] = R(1);
    }
    if (functional.size() != r)
        throw std::invalid_argument("extract_recurrence: functional size mismatch");

    // Numeric step data and directly iterated vectors.
    std::vector<Matrix<R>> mn(top + 1);
    std::vector<R> wn(top + 1);
    for (size_t j = 0; j <= top; ++j) {
        mn[j] = m.at(j);
        wn[j] = w.term(j);
        if (wn[j].is_zero())
            throw certification_error("extract_recurrence: w has a zero term at n=" +
                                      std::to_string(j));
    }
    std::vector<std::vector<R>> vbar(top + 2);
    vbar[0] = v0;
    for (size_t n = 0; n <= top; ++n) {
        std::vector<R> nx(r, R(0));
        for (size_t i = 0; i < r; ++i) {
            for (size_t j = 0; j < r; ++j) {
                if (mn[n](i, j).is_zero()) continue;
                nx[i] += mn[n](i, j) * vbar[n][j];
            }
            nx[i] = nx[i] / wn[n];
        }
        vbar[n + 1] = std::move(nx);
    }

    // Vectorized running products per index, extended lazily: the search
    // below usually stops far before t = r^2, and the entries grow fast.
    std::vector<std::vector<std::vector<R>>> ncols_at(horizon + 1);
    std::vector<Matrix<R>> running(horizon + 1, Matrix<R>::identity(r));
    auto ensure_cols = [&](size_t upto) {
        for (size_t n = 0; n <= horizon; ++n) {
            auto& cols = ncols_at[n];
            while (cols.size() <= upto) {
                size_t t = cols.size();
                std::vector<R> col(rr2);
                for (size_t i = 0; i < r; ++i)
                    for (size_t j = 0; j < r; ++j) col[i * r + j] = running[n](i, j);
                cols.push_back(std::move(col));
                running[n] = mn[n + t] * running[n];
            }
        }
    };

    // w-products W^{(t)}(n) = w_n ... w_{n+t-1}.
    auto wprod = [&](size_t n, size_t t) {
        R acc(1);
        for (size_t j = 0; j < t; ++j) acc *= wn[n + j];
        return acc;
    };

    // The first L <= r^2 columns can already be dependent; working at the
    // smallest solvable window keeps the Gram matrices and the coefficient
    // orders down. The order-L relation is padded back to order r^2 below.
    constexpr size_t kNoThreshold = size_t(-1);
    // Fast-forward: no relation can end before the first column that is
    // dependent on all of its predecessors, scanned cheaply left to right.
    size_t ell_min = 1;
    {
        for (size_t n = 0; n <= horizon; ++n) {
            std::vector<std::pair<size_t, std::vector<R>>> basis;
            size_t first_dep = rr2;
            for (size_t t = 0; t <= rr2; ++t) {
                ensure_cols(t);
                auto v = ncols_at[n][t];
                for (const auto& [pr, bv] : basis) {
                    if (v[pr].is_zero()) continue;
                    R f = v[pr];
                    for (size_t i = 0; i < rr2; ++i) v[i] = v[i] * bv[pr] - f * bv[i];
                }
                size_t pr = 0;
                while (pr < rr2 && v[pr].is_zero()) ++pr;
                if (pr == rr2) {
                    first_dep = t;
                    break;
                }
                basis.emplace_back(pr, std::move(v));
            }
            ell_min = std::max(ell_min, first_dep);
        }
    }
    size_t relation_order = 0, n1 = 0, p = 0;
    std::vector<CFiniteSeq<R>> q;
    for (size_t ell = ell_min; ell <= rr2 && p == 0; ++ell) {
        ensure_cols(ell);
        std::vector<size_t> sn(horizon + 1, kNoThreshold);
        std::vector<std::vector<size_t>> rows_at(horizon + 1);
        bool have_all = true;
        for (size_t n = 0; n <= horizon; ++n) {
            std::vector<std::vector<R>> window(ncols_at[n].begin(),
                                               ncols_at[n].begin() + long(ell + 1));
            auto th = detail::rank_threshold(window);
            if (th) {
                sn[n] = th->t_indep;
                rows_at[n] = std::move(th->pivot_rows);
            }
            if (sn[n] == kNoThreshold && n >= params.n1_max) have_all = false;
        }
        if (!have_all) continue;
        // Eventual periodicity of s_n within the bounds; smallest period first.
        size_t nn1 = 0, pp0 = 0;
        for (size_t pp = 1; pp <= params.p_max && pp0 == 0; ++pp)
            for (size_t nn = 0; nn <= params.n1_max; ++nn) {
                bool ok = true;
                for (size_t n = nn; n <= horizon && ok; ++n) {
                    if (sn[n] == kNoThreshold) ok = false;
                    else if (n + pp <= horizon && sn[n] != sn[n + pp]) ok = false;
                }
                if (ok) {
                    nn1 = nn;
                    pp0 = pp;
                    break;
                }
            }
        if (pp0 == 0) {
            if (ell == rr2)
                throw certification_error(
                    "extract_recurrence: rank thresholds not eventually periodic within "
                    "bounds; raise n1_max/p_max");
            continue;
        }
        n1 = nn1;
        p = pp0;
        relation_order = ell;

        // Per residue class: exact per-index solves, then a C-finite refit of
        // each coefficient value stream. The fast path runs Cramer on a fixed
        // pivot-row subset (chosen at the class's first index); if that
        // submatrix degenerates later in the class, the Gram system (always
        // nonsingular for independent columns over these formally real
        // domains) takes over.
        q.assign(ell + 1, CFiniteSeq<R>::zero());
        for (size_t res = 0; res < p; ++res) {
            size_t start = n1 + res;
            if (start > horizon) continue;
            size_t sstar = sn[start];
            size_t k = ell - sstar;
            const std::vector<size_t>& rows = rows_at[start];
            auto class_streams = [&](bool use_gram) {
                std::vector<std::vector<R>> streams(ell + 1);
                for (size_t n = start; n <= horizon; n += p) {
                    const auto& ncols = ncols_at[n];
                    std::vector<R> yprime(k, R(0));
                    R det(1);
                    if (k > 0) {
                        Matrix<R> a(k, k);
                        std::vector<R> rhs(k, R(0));
                        if (!use_gram) {
                            for (size_t i = 0; i < k; ++i) {
                                for (size_t j = 0; j < k; ++j)
                                    a(i, j) = ncols[sstar + j][rows[i]];
                                rhs[i] = ncols[ell][rows[i]];
                            }
                        } else {
                            for (size_t i = 0; i < k; ++i)
                                for (size_t j = 0; j < k; ++j)
                                    for (size_t x = 0; x < rr2; ++x)
                                        a(i, j) += ncols[sstar + i][x] * ncols[sstar + j][x];
                            for (size_t i = 0; i < k; ++i)
                                for (size_t x = 0; x < rr2; ++x)
                                    rhs[i] += ncols[sstar + i][x] * ncols[ell][x];
                        }
                        auto bj = bareiss_jordan_solve(a, rhs);
                        if (!bj) return std::optional<decltype(streams)>();
                        det = bj->first;
                        yprime = std::move(bj->second);
                    }
                    for (size_t t = 0; t <= ell; ++t) {
                        R val(0);
                        if (t == ell)
                            val = det * wprod(n, ell);
                        else if (t >= sstar)
                            val = yprime[t - sstar] * wprod(n, t);
                        streams[t].push_back(std::move(val));
                    }
                }
                return std::optional<decltype(streams)>(std::move(streams));
            };
            auto streams = rows.size() == k ? class_streams(false) : std::nullopt;
            if (!streams) streams = class_streams(true);
            if (!streams)
                throw certification_error(
                    "extract_recurrence: singular Gram matrix in residue class " +
                    std::to_string(res));
            for (size_t t = 0; t <= ell; ++t) {
                size_t samples = (*streams)[t].size();
                auto fit =
                    fit_cfinite_samples((*streams)[t], 0, samples >= 3 ? (samples - 1) / 2 : 0);
                if (!fit)
                    throw bounds_error(
                        "extract_recurrence: coefficient stream does not fit a C-finite "
                        "recurrence within the horizon; raise horizon");
                q[t] = q[t].add(detail::lift_to_residue_class(*fit, p, start));
            }
        }
        for (auto& qq : q) qq = qq.minimize();
    }

    // Certification of the order-L relation: componentwise on the horizon,
    // with a nonvanishing leading coefficient.
    size_t ell = relation_order;
    for (size_t n = n1; n + ell <= horizon + rr2 && n <= horizon; ++n) {
        R lead = q[ell].term(n);
        if (lead.is_zero())
            throw certification_error("extract_recurrence: leading coefficient vanishes at n=" +
                                      std::to_string(n));
        for (size_t j = 0; j < r; ++j) {
            R acc(0);
            for (size_t t = 0; t < ell; ++t) acc += q[t].term(n) * vbar[n + t][j];
            if (!(acc - lead * vbar[n + ell][j]).is_zero())
                throw certification_error("extract_recurrence: certification failed at n=" +
                                          std::to_string(n) + ", component " + std::to_string(j));
        }
    }

    // Pad to order exactly r^2: the order-L relation applied at n + (r^2-L).
    size_t delta = rr2 - ell;
    std::vector<CFiniteSeq<R>> qq(rr2 + 1, CFiniteSeq<R>::zero());
    for (size_t t = 0; t <= ell; ++t) qq[t + delta] = delta ? q[t].shifted(delta) : q[t];
    size_t vf = n1 > delta ? n1 - delta : 0;
    size_t cert_horizon = horizon - delta;
    for (size_t n = vf; n <= cert_horizon; ++n) {
        R lead = qq[rr2].term(n);
        if (lead.is_zero())
            throw certification_error("extract_recurrence: padded leading coefficient vanishes");
        for (size_t j = 0; j < r; ++j) {
            R acc(0);
            for (size_t t = 0; t < rr2; ++t) acc += qq[t].term(n) * vbar[n + t][j];
            if (!(acc - lead * vbar[n + rr2][j]).is_zero())
                throw certification_error("extract_recurrence: padded certification failed at n=" +
                                          std::to_string(n));
        }
    }

    std::vector<R> initials;
    for (size_t n = 0; n < vf + rr2; ++n) {
        R acc(0);
        for (size_t j = 0; j < r; ++j) acc += functional[j] * vbar[n][j];
        initials.push_back(std::move(acc));
    }
    return C2Recurrence<R>(std::move(qq), vf, std::move(initials), cert_horizon);
}

template <class R>
struct QuadraticSubseqResult {
    C2Recurrence<R> rec;  // recurrence for b_n = a_{zeta(n + shift)}
    size_t shift;         // start-index shift making all indices well defined
};

/// Recurrence for the quadratic subsequence b_n = a_{c*binom(n,2) + d*n + e}.
/// The state vector advances by the matrix power sequence companion(a)^{cn+d'},
/// and the recurrence is extracted from that system, then certified against
/// directly computed terms of a.
template <class R>
QuadraticSubseqResult<R> quadratic_subseq(const CFiniteSeq<R>& a, long c, long d, long e,
                                          const ExtractionParams& params = {}) {
    if (c < 1) throw std::invalid_argument("quadratic_subseq: c must be >= 1");
    auto zeta = [&](long n) { return c * (n * (n - 1) / 2) + d * n + e; };
    size_t shift = 0;
    while (c * long(shift) + d < 0 || zeta(long(shift)) < long(a.valid_from())) {
        ++shift;
        if (shift > size_t(std::abs(d) + std::abs(e) + long(a.valid_from()) + 2))
            throw std::invalid_argument("quadratic_subseq: no valid start index");
    }
    size_t s = a.order();
    if (s == 0) {
        std::vector<CFiniteSeq<R>> q = {CFiniteSeq<R>::zero(), CFiniteSeq<R>::constant(R(1))};
        return {C2Recurrence<R>(std::move(q), 0, {R(0)}, params.horizon), shift};
    }
    long d2 = c * long(shift) + d;
    auto mseq = CFMatrixSeq<R>::const_power(a.companion(), c, d2);
    std::vector<R> v0;
    long z0 = zeta(long(shift));
    for (size_t i = 0; i < s; ++i) v0.push_back(a.term(size_t(z0) + i));
    auto rec = extract_recurrence(mseq, CFiniteSeq<R>::constant(R(1)), v0, params);

    // Oracle cross-check: the relation's own terms against direct iteration.
    size_t upto = rec.certified_horizon();
    auto got = rec.terms(upto + 1);
    for (size_t n = 0; n <= upto; ++n) {
        long idx = zeta(long(n + shift));
        if (!(got[n] - a.term(size_t(idx))).is_zero())
            throw certification_error("quadratic_subseq: mismatch against direct terms at n=" +
                                      std::to_string(n));
    }
    return {std::move(rec), shift};
}

enum class C2Op { add, mul };

/// Closure of C^2-finite sequences under + and *: stacks the two relations
/// into one vector recurrence (2s states for sums, s^2 for products) and
/// extracts; the result is certified against direct sums/products of the
/// input terms.
template <class R>
C2Recurrence<R> c2_combine(C2Recurrence<R> a, C2Recurrence<R> b, C2Op op,
                           const ExtractionParams& params = {}) {
    while (a.order() < b.order()) a = a.padded();
    while (b.order() < a.order()) b = b.padded();
    size_t s = a.order();
    size_t n0 = std::max(a.valid_from(), b.valid_from());

    // Shift every coefficient sequence so the stacked system starts at 0.
    std::vector<CFiniteSeq<R>> ca, cb;
    for (size_t t = 0; t <= s; ++t) {
        ca.push_back(a.coeff(t).shifted(n0));
        cb.push_back(b.coeff(t).shifted(n0));
    }
    CFiniteSeq<R> w = ca[s].mul(cb[s]).minimize();

    size_t dim = op == C2Op::add ? 2 * s : s * s;
    CFMatrixSeq<R> m(dim, dim);
    if (op == C2Op::add) {
        for (size_t i = 0; i + 1 < s; ++i) {
            m.entry(i, i + 1) = w;
            m.entry(s + i, s + i + 1) = w;
        }
        for (size_t t = 0; t < s; ++t) {
            m.entry(s - 1, t) = cb[s].mul(ca[t]).minimize();
            m.entry(2 * s - 1, s + t) = ca[s].mul(cb[t]).minimize();
        }
    } else {
        auto at = [&](size_t t1, size_t t2) { return t1 * s + t2; };
        for (size_t t1 = 0; t1 < s; ++t1)
            for (size_t t2 = 0; t2 < s; ++t2) {
                if (t1 + 1 < s && t2 + 1 < s) {
                    m.entry(at(t1, t2), at(t1 + 1, t2 + 1)) = w;
                } else if (t1 + 1 == s && t2 + 1 < s) {
                    for (size_t u = 0; u < s; ++u)
                        m.entry(at(t1, t2), at(u, t2 + 1)) = cb[s].mul(ca[u]).minimize();
                } else if (t1 + 1 < s && t2 + 1 == s) {
                    for (size_t u = 0; u < s; ++u)
                        m.entry(at(t1, t2), at(t1 + 1, u)) = ca[s].mul(cb[u]).minimize();
                } else {
                    for (size_t u1 = 0; u1 < s; ++u1)
                        for (size_t u2 = 0; u2 < s; ++u2)
                            m.entry(at(t1, t2), at(u1, u2)) = ca[u1].mul(cb[u2]).minimize();
                }
            }
    }

    size_t need0 = n0 + s + 1;
    auto ta = a.terms(need0), tb = b.terms(need0);
    std::vector<R> v0;
    std::vector<R> functional(dim, R(0));
    if (op == C2Op::add) {
        for (size_t i = 0; i < s; ++i) v0.push_back(ta[n0 + i]);
        for (size_t i = 0; i < s; ++i) v0.push_back(tb[n0 + i]);
        functional[0] = R(1);
        functional[s] = R(1);
    } else {
        for (size_t t1 = 0; t1 < s; ++t1)
            for (size_t t2 = 0; t2 < s; ++t2) v0.push_back(ta[n0 + t1] * tb[n0 + t2]);
        functional[0] = R(1);
    }

    auto rec = extract_recurrence(m, w, v0, params, functional);

    // Undo the start shift: prepend n0 zero values to every coefficient
    // sequence and restore the original initial terms.
    size_t rr = rec.order();
    std::vector<CFiniteSeq<R>> q;
    for (size_t t = 0; t <= rr; ++t) {
        const auto& src = rec.coeff(t);
        std::vector<R> init(n0, R(0));
        auto srcinit = src.terms(src.valid_from() + src.order());
        init.insert(init.end(), srcinit.begin(), srcinit.end());
        q.push_back(CFiniteSeq<R>(src.coeffs(), std::move(init), src.valid_from() + n0));
    }
    size_t vf = rec.valid_from() + n0;
    size_t horizon = rec.certified_horizon() + n0;
    size_t cnt = vf + rr;
    std::vector<R> initials;
    auto taa = a.terms(cnt), tbb = b.terms(cnt);
    for (size_t n = 0; n < cnt; ++n)
        initials.push_back(op == C2Op::add ? taa[n] + tbb[n] : taa[n] * tbb[n]);
    C2Recurrence<R> out(std::move(q), vf, std::move(initials), horizon);

    // Termwise certification against the oracle combination.
    size_t check = horizon + 1;
    auto want_a = a.terms(check), want_b = b.terms(check);
    auto got = out.terms(check);
    for (size_t n = 0; n < check; ++n) {
        R want = op == C2Op::add ? want_a[n] + want_b[n] : want_a[n] * want_b[n];
        if (!(got[n] - want).is_zero())
            throw certification_error("c2_combine: mismatch against direct combination at n=" +
                                      std::to_string(n));
    }
    return out;
}

/// Inverse problem: fit C-finite-coefficient weights over a shared ansatz
/// basis from a term prefix, then certify on a holdout suffix. The leading
/// coefficient must be nonvanishing across the sampled range.
template <class R>
C2Recurrence<R> c2_guess(const std::vector<R>& terms, size_t r,
                         const std::vector<CFiniteSeq<R>>& basis, size_t holdout) {
    if (r < 1 || basis.empty()) throw std::invalid_argument("c2_guess: empty ansatz");
    size_t unknowns = (r + 1) * basis.size();
    if (terms.size() < unknowns + holdout + r)
        throw std::invalid_argument("c2_guess: underdetermined system; need >= " +
                                    std::to_string(unknowns + holdout + r) + " terms");
    size_t total_eq = terms.size() - r;
    size_t fit_eq = total_eq - holdout;

    std::vector<std::vector<R>> basis_vals(basis.size());
    for (size_t bidx = 0; bidx < basis.size(); ++bidx)
        basis_vals[bidx] = basis[bidx].terms(total_eq);

    Matrix<R> sys(fit_eq, unknowns);
    for (size_t n = 0; n < fit_eq; ++n)
        for (size_t t = 0; t <= r; ++t)
            for (size_t bidx = 0; bidx < basis.size(); ++bidx) {
                R val = basis_vals[bidx][n] * terms[n + t];
                sys(n, t * basis.size() + bidx) = t == r ? -val : val;
            }
    auto cands = nullspace(sys);
    if (cands.empty())
        throw certification_error("c2_guess: inconsistent system (empty nullspace)");
    if (cands.size() > 1) {
        std::vector<R> sum(unknowns, R(0));
        for (const auto& v : cands)
            for (size_t i = 0; i < unknowns; ++i) sum[i] += v[i];
        cands.push_back(std::move(sum));
    }

    for (const auto& cand : cands) {
        auto qval = [&](size_t t, size_t n) {
            R acc(0);
            for (size_t bidx = 0; bidx < basis.size(); ++bidx)
                acc += cand[t * basis.size() + bidx] * basis_vals[bidx][n];
            return acc;
        };
        bool ok = true;
        for (size_t n = 0; n < total_eq && ok; ++n)
            if (qval(r, n).is_zero()) ok = false;
        for (size_t n = 0; n < total_eq && ok; ++n) {
            R acc(0);
            for (size_t t = 0; t < r; ++t) acc += qval(t, n) * terms[n + t];
            if (!(acc - qval(r, n) * terms[n + r]).is_zero()) ok = false;
        }
        if (!ok) continue;
        R scale = R(1) / qval(r, 0);
        std::vector<CFiniteSeq<R>> q;
        for (size_t t = 0; t <= r; ++t) {
            CFiniteSeq<R> acc = CFiniteSeq<R>::zero();
            for (size_t bidx = 0; bidx < basis.size(); ++bidx) {
                R wgt = cand[t * basis.size() + bidx] * scale;
                if (!wgt.is_zero()) acc = acc.add(basis[bidx].scaled(wgt));
            }
            q.push_back(acc.minimize());
        }
        std::vector<R> init(terms.begin(), terms.begin() + long(r));
        return C2Recurrence<R>(std::move(q), 0, std::move(init), terms.size() - 1);
    }
    throw certification_error("c2_guess: holdout violation or vanishing leading coefficient");
}

}  // namespace c2seq

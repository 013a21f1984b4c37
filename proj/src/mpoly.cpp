#include "c2seq/mpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace c2seq {

MPoly MPoly::var(const std::string& name, uint32_t exp) {
    if (name.empty()) throw std::invalid_argument("MPoly: empty variable name");
    if (exp == 0) return MPoly(Rat(1));
    MPoly p;
    p.vars_ = {name};
    p.terms_[{exp}] = Rat(1);
    return p;
}

Rat MPoly::constant_term() const {
    Monomial zero(vars_.size(), 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat MPoly::as_constant() const {
    if (!is_constant()) throw std::domain_error("MPoly: not a constant: " + str());
    return constant_term();
}

unsigned long MPoly::total_degree() const {
    if (terms_.empty()) return 0;
    unsigned long d = 0;
    for (auto e : terms_.rbegin()->first) d += e;
    return d;
}

unsigned long MPoly::degree_in(const std::string& var) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) return 0;
    size_t idx = size_t(it - vars_.begin());
    unsigned long d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, (unsigned long)m[idx]);
    return d;
}

Rat MPoly::leading_coeff() const {
    return terms_.empty() ? Rat(0) : terms_.rbegin()->second;
}

void MPoly::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.is_zero())
            it = terms_.erase(it);
        else
            ++it;
    }
    // Strip variables no term uses.
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [m, c] : terms_)
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
    std::vector<std::string> nv;
    std::vector<size_t> keep;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) {
            nv.push_back(vars_[i]);
            keep.push_back(i);
        }
    std::map<Monomial, Rat, DegLexLess> nt;
    for (const auto& [m, c] : terms_) {
        Monomial mm(keep.size());
        for (size_t i = 0; i < keep.size(); ++i) mm[i] = m[keep[i]];
        nt[std::move(mm)] = c;
    }
    vars_ = std::move(nv);
    terms_ = std::move(nt);
}

std::vector<std::string> MPoly::merged_vars(const MPoly& a, const MPoly& b) {
    std::vector<std::string> v;
    std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                   std::back_inserter(v));
    return v;
}

MPoly MPoly::widened(const std::vector<std::string>& allvars) const {
    if (allvars == vars_) return *this;
    std::vector<size_t> pos(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::lower_bound(allvars.begin(), allvars.end(), vars_[i]);
        pos[i] = size_t(it - allvars.begin());
    }
    MPoly r;
    r.vars_ = allvars;
    for (const auto& [m, c] : terms_) {
        Monomial mm(allvars.size(), 0);
        for (size_t i = 0; i < m.size(); ++i) mm[pos[i]] = m[i];
        r.terms_[std::move(mm)] = c;
    }
    return r;
}

MPoly MPoly::operator-() const {
    MPoly r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
    auto allvars = merged_vars(*this, o);
    MPoly a = widened(allvars);
    MPoly b = o.widened(allvars);
    for (const auto& [m, c] : b.terms_) {
        auto [it, fresh] = a.terms_.try_emplace(m, c);
        if (!fresh) it->second += c;
    }
    a.normalize();
    return *this = std::move(a);
}

MPoly& MPoly::operator-=(const MPoly& o) { return *this += -o; }

MPoly operator*(const MPoly& a, const MPoly& b) {
    if (a.is_zero() || b.is_zero()) return MPoly();
    auto allvars = MPoly::merged_vars(a, b);
    MPoly wa = a.widened(allvars);
    MPoly wb = b.widened(allvars);
    MPoly r;
    r.vars_ = allvars;
    for (const auto& [ma, ca] : wa.terms_)
        for (const auto& [mb, cb] : wb.terms_) {
            Monomial m(allvars.size());
            for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            Rat p = ca * cb;
            auto [it, fresh] = r.terms_.try_emplace(std::move(m), p);
            if (!fresh) it->second += p;
        }
    r.normalize();
    return r;
}

MPoly MPoly::scaled(const Rat& c) const {
    if (c.is_zero()) return MPoly();
    MPoly r(*this);
    for (auto& [m, v] : r.terms_) v *= c;
    return r;
}

MPoly MPoly::pow(unsigned long e) const {
    MPoly r(Rat(1));
    MPoly base(*this);
    while (e > 0) {
        if (e & 1) r *= base;
        base = (e >>= 1) ? base * base : MPoly();
    }
    return r;
}

Rat MPoly::eval(const std::map<std::string, Rat>& assign) const {
    std::vector<Rat> vals;
    vals.reserve(vars_.size());
    for (const auto& v : vars_) {
        auto it = assign.find(v);
        if (it == assign.end())
            throw std::invalid_argument("MPoly::eval: no value for variable '" + v + "'");
        vals.push_back(it->second);
    }
    Rat acc(0);
    for (const auto& [m, c] : terms_) {
        Rat t = c;
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i]) t *= rat_pow(vals[i], m[i]);
        acc += t;
    }
    return acc;
}

MPoly MPoly::subst(const std::map<std::string, MPoly>& assign) const {
    MPoly acc;
    for (const auto& [m, c] : terms_) {
        MPoly t{c};
        for (size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            auto it = assign.find(vars_[i]);
            MPoly base = it != assign.end() ? it->second : MPoly::var(vars_[i]);
            t *= base.pow(m[i]);
        }
        acc += t;
    }
    return acc;
}

std::optional<MPoly> MPoly::divided_exactly_by(const MPoly& d) const {
    if (d.is_zero()) throw std::domain_error("MPoly: division by zero polynomial");
    auto allvars = merged_vars(*this, d);
    MPoly r = widened(allvars);
    MPoly dd = d.widened(allvars);
    const auto& [dlm, dlc] = *dd.terms_.rbegin();
    MPoly q;
    q.vars_ = allvars;
    while (!r.terms_.empty()) {
        const auto& [rlm, rlc] = *r.terms_.rbegin();
        Monomial t(allvars.size());
        for (size_t i = 0; i < t.size(); ++i) {
            if (rlm[i] < dlm[i]) return std::nullopt;
            t[i] = rlm[i] - dlm[i];
        }
        Rat tc = rlc / dlc;
        MPoly mono;
        mono.vars_ = allvars;
        mono.terms_[t] = tc;
        q.terms_[t] = tc;
        r -= mono * dd;
        r = r.widened(allvars);
    }
    q.normalize();
    return q;
}

namespace {

// Univariate view of an MPoly in one of its variables: dense coefficient
// vector whose entries are polynomials in the remaining variables.
struct UnivView {
    std::vector<MPoly> coeff;  // coeff[k] multiplies v^k
    long deg() const {
        for (long k = long(coeff.size()) - 1; k >= 0; --k)
            if (!coeff[k].is_zero()) return k;
        return -1;
    }
};

UnivView univ_view(const MPoly& p, const std::string& v) {
    UnivView u;
    u.coeff.resize(p.degree_in(v) + 1);
    for (uint32_t k = 0; k < u.coeff.size(); ++k) u.coeff[k] = p.coeff_of(v, k);
    return u;
}

MPoly univ_collect(const UnivView& u, const std::string& v) {
    MPoly acc;
    for (size_t k = 0; k < u.coeff.size(); ++k)
        if (!u.coeff[k].is_zero()) acc += u.coeff[k] * MPoly::var(v, uint32_t(k));
    return acc;
}

}  // namespace

MPoly MPoly::coeff_of(const std::string& var, uint32_t k) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) return k == 0 ? *this : MPoly();
    size_t idx = size_t(it - vars_.begin());
    MPoly r;
    r.vars_ = vars_;
    for (const auto& [m, c] : terms_) {
        if (m[idx] != k) continue;
        Monomial mm = m;
        mm[idx] = 0;
        r.terms_[std::move(mm)] = c;
    }
    r.normalize();
    return r;
}

namespace {

// Content of a coefficient list: rational gcd when every coefficient is a
// constant (contains growth in the univariate Euclid), polynomial gcd
// otherwise.
MPoly view_content(const UnivView& u) {
    bool all_const = true;
    for (const auto& q : u.coeff)
        if (!q.is_constant()) {
            all_const = false;
            break;
        }
    if (all_const) {
        Int gn(0), ld(1);
        for (const auto& q : u.coeff) {
            Rat c = q.constant_term();
            gn = ::gcd(gn, c.num());
            ld = ::lcm(ld, c.den());
        }
        return gn == 0 ? MPoly() : MPoly(Rat(gn, ld));
    }
    MPoly g;
    for (const auto& q : u.coeff) g = MPoly::gcd(g, q);
    return g;
}

UnivView view_divided(UnivView u, const MPoly& d) {
    for (auto& q : u.coeff) {
        if (q.is_zero()) continue;
        auto r = q.divided_exactly_by(d);
        if (!r) throw std::logic_error("MPoly::gcd: content division failed");
        q = *r;
    }
    return u;
}

// R with deg(R) < deg(B), obtained from A by repeated cross-multiplied
// elimination of the leading term (pseudo-remainder up to a unit content).
UnivView view_remainder(UnivView r, const UnivView& b) {
    long db = b.deg();
    while (r.deg() >= db) {
        long dr = r.deg();
        MPoly la = r.coeff[dr], lb = b.coeff[db];
        UnivView nxt;
        nxt.coeff.assign(size_t(dr), MPoly());
        for (long k = 0; k < dr; ++k) {
            MPoly t = r.coeff[k] * lb;
            long j = k - (dr - db);
            if (j >= 0 && j < db) t -= b.coeff[j] * la;
            nxt.coeff[k] = std::move(t);
        }
        r = std::move(nxt);
        if (r.coeff.empty()) break;
    }
    return r;
}

}  // namespace

MPoly MPoly::gcd(const MPoly& a, const MPoly& b) {
    auto scalar_normalized = [](MPoly p) {
        Rat lc = p.leading_coeff();
        return lc.is_zero() || lc.is_one() ? p : p.scaled(Rat(1) / lc);
    };
    if (a.is_zero()) return scalar_normalized(b);
    if (b.is_zero()) return scalar_normalized(a);
    if (a.is_constant() || b.is_constant()) return MPoly(Rat(1));

    // Single-term arguments reduce to an exponent-wise minimum.
    auto mono_gcd = [](const MPoly& mono, const MPoly& p) {
        auto allv = merged_vars(mono, p);
        MPoly wm = mono.widened(allv), wp = p.widened(allv);
        Monomial g = wm.terms_.begin()->first;
        for (const auto& [m, c] : wp.terms_)
            for (size_t i = 0; i < g.size(); ++i) g[i] = std::min(g[i], m[i]);
        MPoly r;
        r.vars_ = allv;
        r.terms_[g] = Rat(1);
        r.normalize();
        return r;
    };
    if (a.term_count() == 1) return mono_gcd(a, b);
    if (b.term_count() == 1) return mono_gcd(b, a);

    // Main variable: last variable of the merged list.
    auto allvars = merged_vars(a, b);
    const std::string v = allvars.back();
    if (a.degree_in(v) == 0 || b.degree_in(v) == 0) {
        // v appears in only one argument; gcd lives in that side's content.
        const MPoly& with_v = a.degree_in(v) ? a : b;
        const MPoly& other = a.degree_in(v) ? b : a;
        return gcd(view_content(univ_view(with_v, v)), other);
    }

    UnivView pa = univ_view(a, v), pb = univ_view(b, v);
    MPoly ca = view_content(pa), cb = view_content(pb);
    pa = view_divided(std::move(pa), ca);
    pb = view_divided(std::move(pb), cb);
    MPoly cg = gcd(ca, cb);

    if (pa.deg() < pb.deg()) std::swap(pa, pb);
    while (pb.deg() >= 0) {
        UnivView r = view_remainder(pa, pb);
        pa = std::move(pb);
        if (r.deg() < 0) {
            pb = UnivView{};
        } else {
            MPoly cr = view_content(r);
            pb = view_divided(std::move(r), cr);
        }
    }
    return scalar_normalized(cg * univ_collect(pa, v));
}

std::string MPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat coef = c;
        if (first) {
            if (coef.sign() < 0) {
                os << "-";
                coef = -coef;
            }
        } else {
            os << (coef.sign() < 0 ? " - " : " + ");
            if (coef.sign() < 0) coef = -coef;
        }
        first = false;
        bool any_var = false;
        std::ostringstream mono;
        for (size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            if (any_var) mono << "*";
            mono << vars_[i];
            if (m[i] > 1) mono << "^" << m[i];
            any_var = true;
        }
        if (!any_var) {
            os << coef.str();
        } else if (coef.is_one()) {
            os << mono.str();
        } else {
            os << coef.str() << "*" << mono.str();
        }
    }
    return os.str();
}

}  // namespace c2seq

#include "c2seq/ratfunc.hpp"

#include <stdexcept>

namespace c2seq {

RatFunc::RatFunc(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    canonicalize();
}

void RatFunc::canonicalize() {
    if (num_.is_zero()) {
        den_ = MPoly(Rat(1));
        return;
    }
    if (!den_.is_constant()) {
        MPoly g = MPoly::gcd(num_, den_);
        if (g.total_degree() > 0) {
            num_ = *num_.divided_exactly_by(g);
            den_ = *den_.divided_exactly_by(g);
        }
    }
    Rat lc = den_.leading_coeff();
    if (!lc.is_one()) {
        Rat inv = Rat(1) / lc;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

const MPoly& RatFunc::as_poly() const {
    if (!is_polynomial_one_den())
        throw std::domain_error("RatFunc: not a polynomial: " + str());
    return num_;
}

Rat RatFunc::as_rat() const {
    if (!is_constant()) throw std::domain_error("RatFunc: not a constant: " + str());
    return num_.constant_term();
}

RatFunc RatFunc::operator-() const {
    RatFunc r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc();
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
    if (a.is_zero()) return RatFunc();
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

Rat RatFunc::eval(const std::map<std::string, Rat>& assign) const {
    Rat d = den_.eval(assign);
    if (d.is_zero()) throw std::domain_error("RatFunc::eval: denominator vanishes");
    return num_.eval(assign) / d;
}

std::string RatFunc::str() const {
    if (is_polynomial_one_den()) return num_.str();
    return "(" + num_.str() + ") / (" + den_.str() + ")";
}

}  // namespace c2seq

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "c2seq/cfmatrix.hpp"

using namespace c2seq;

namespace {

using Seq = CFiniteSeq<Rat>;

Seq fib11() { return Seq::fibonacci(Rat(1), Rat(1)); }  // 1 1 2 3 5 8 13 21 34

Seq random_seq(std::mt19937& rng, size_t max_order = 4) {
    std::uniform_int_distribution<size_t> ord(1, max_order);
    std::uniform_int_distribution<long> val(-3, 3);
    size_t s = ord(rng);
    std::vector<Rat> coeffs, init;
    for (size_t i = 0; i < s; ++i) coeffs.push_back(Rat(val(rng)));
    for (size_t i = 0; i < s; ++i) init.push_back(Rat(val(rng)));
    return Seq(std::move(coeffs), std::move(init));
}

Matrix<Rat> fib_companion() {
    Matrix<Rat> m(2, 2);
    m(0, 0) = Rat(1);
    m(0, 1) = Rat(1);
    m(1, 0) = Rat(1);
    return m;
}

// Smallest integer alpha with |a_n| <= alpha^n on [1, upto]; the growth
// diagnostic for C-finite sequences.
long fit_growth_base(const Seq& a, size_t upto, long cap = 64) {
    auto ts = a.terms(upto + 1);
    for (long alpha = 1; alpha <= cap; ++alpha) {
        bool ok = true;
        for (size_t n = 1; n <= upto && ok; ++n) {
            Rat bound(int_pow(Int(alpha), n));
            if (ts[n].abs() > bound) ok = false;
        }
        if (ok) return alpha;
    }
    return -1;
}

}  // namespace

TEST_CASE("cf_term examples") {
    CHECK(fib11().term(8) == Rat(34));
    CHECK(fib11().term(0) == Rat(1));
    CHECK(fib11().term(1) == Rat(1));
    CHECK(Seq::indicator(2, 0).term(5) == Rat(0));
}

TEST_CASE("every constructed sequence satisfies its recurrence on a window") {
    std::mt19937 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        Seq a = random_seq(rng);
        auto ts = a.terms(200);
        size_t s = a.order();
        for (size_t n = a.valid_from(); n + s < 200; ++n) {
            Rat acc(0);
            for (size_t t = 0; t < s; ++t) acc += a.coeffs()[t] * ts[n + t];
            CHECK(acc == ts[n + s]);
        }
    }
}

TEST_CASE("cf_add") {
    auto s = fib11().add(Seq::constant(Rat(1)));
    auto want = std::vector<Rat>{Rat(2), Rat(2), Rat(3), Rat(4), Rat(6), Rat(9)};
    CHECK(s.terms(6) == want);

    auto z = fib11().add(Seq::zero());
    CHECK(z.terms(30) == fib11().terms(30));

    auto ones = Seq::indicator(2, 0).add(Seq::indicator(2, 1));
    for (auto& t : ones.terms(12)) CHECK(t == Rat(1));
}

TEST_CASE("cf_mul, including the zero-divisor pair") {
    // Neither factor is zero but the product is: the ring has zero divisors.
    auto zd = Seq::indicator(2, 0).mul(Seq::indicator(2, 1));
    CHECK(!Seq::indicator(2, 0).is_zero());
    CHECK(!Seq::indicator(2, 1).is_zero());
    CHECK(zd.is_zero());

    auto sq = fib11().mul(fib11());
    auto want = std::vector<Rat>{Rat(1), Rat(1), Rat(4), Rat(9), Rat(25), Rat(64)};
    CHECK(sq.terms(6) == want);

    auto same = Seq::constant(Rat(1)).mul(fib11());
    CHECK(same.terms(20) == fib11().terms(20));
}

TEST_CASE("cf_subseq") {
    auto odd = fib11().subseq(2, 1);
    auto want = std::vector<Rat>{Rat(1), Rat(3), Rat(8), Rat(21)};
    CHECK(odd.terms(4) == want);
    REQUIRE(odd.order() == 2);
    // b_{n+2} = 3 b_{n+1} - b_n
    CHECK(odd.coeffs()[1] == Rat(3));
    CHECK(odd.coeffs()[0] == Rat(-1));

    CHECK(fib11().subseq(1, 0).terms(40) == fib11().terms(40));
    auto shifted = fib11().subseq(1, 2);
    for (size_t n = 0; n < 20; ++n) CHECK(shifted.term(n) == fib11().term(n + 2));
    CHECK_THROWS_AS(fib11().subseq(0, 0), std::invalid_argument);
}

TEST_CASE("cf_indicator") {
    auto i20 = Seq::indicator(2, 0);
    CHECK(i20.terms(4) == std::vector<Rat>{Rat(1), Rat(0), Rat(1), Rat(0)});
    for (auto& t : Seq::indicator(1, 0).terms(8)) CHECK(t == Rat(1));
    auto i32 = Seq::indicator(3, 2);
    CHECK(i32.terms(6) == std::vector<Rat>{Rat(0), Rat(0), Rat(1), Rat(0), Rat(0), Rat(1)});
    CHECK_THROWS_AS(Seq::indicator(2, 2), std::invalid_argument);
}

TEST_CASE("cf_minimize") {
    auto doubled = fib11().add(fib11());
    CHECK(doubled.order() == 4);
    auto min = doubled.minimize();
    CHECK(min.order() == 2);
    CHECK(min.terms(30) == doubled.terms(30));

    // A zero sequence of declared order 3 collapses to order 0.
    Seq zero3({Rat(1), Rat(2), Rat(-1)}, {Rat(0), Rat(0), Rat(0)});
    CHECK(zero3.minimize().order() == 0);

    CHECK(fib11().minimize() == fib11());
}

TEST_CASE("cf_is_zero is exact") {
    CHECK(fib11().add(fib11().negated()).is_zero());
    CHECK(!Seq::indicator(2, 0).is_zero());
    CHECK(Seq::indicator(2, 0).mul(Seq::indicator(2, 1)).is_zero());
}

TEST_CASE("cf_zero_pattern") {
    auto zp = Seq::indicator(2, 0).zero_pattern(8, 6, 64);
    CHECK(zp.exceptional.empty());
    CHECK(zp.n1 == 0);
    CHECK(zp.p == 2);
    CHECK(zp.residues == std::set<size_t>{1});

    auto fibzp = fib11().zero_pattern(8, 6, 64);
    CHECK(fibzp.residues.empty());
    CHECK(fibzp.exceptional.empty());

    // a_0 = 0 only.
    auto f01 = Seq::fibonacci(Rat(0), Rat(1));
    auto zp2 = f01.zero_pattern(8, 6, 64);
    CHECK(zp2.exceptional == std::set<size_t>{0});
    CHECK(zp2.residues.empty());
}

TEST_CASE("closure operations agree termwise with direct combination") {
    std::mt19937 rng(23);
    for (int rep = 0; rep < 30; ++rep) {
        Seq a = random_seq(rng), b = random_seq(rng);
        auto ta = a.terms(70), tb = b.terms(70);
        auto sum = a.add(b), prod = a.mul(b);
        auto tsum = sum.terms(64), tprod = prod.terms(64);
        for (size_t n = 0; n < 64; ++n) {
            CHECK(tsum[n] == ta[n] + tb[n]);
            CHECK(tprod[n] == ta[n] * tb[n]);
        }
        std::uniform_int_distribution<size_t> tdist(1, 3), rdist(0, 3);
        size_t t = tdist(rng), r = rdist(rng);
        auto sub = a.subseq(t, r);
        for (size_t n = 0; n < 20; ++n) CHECK(sub.term(n) == a.term(t * n + r));
    }
}

TEST_CASE("growth diagnostic: |a_n| <= alpha^n for a fitted alpha") {
    CHECK(fit_growth_base(fib11(), 64) == 2);
    std::mt19937 rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        Seq a = random_seq(rng);
        CHECK(fit_growth_base(a, 48) > 0);
    }
}

TEST_CASE("cfm_at") {
    auto c = CFMatrixSeq<Rat>::constant(fib_companion());
    CHECK(c.at(0) == fib_companion());
    CHECK(c.at(17) == fib_companion());

    CFMatrixSeq<Rat> f(1, 1);
    f.entry(0, 0) = fib11();
    CHECK(f.at(8)(0, 0) == Rat(34));

    CFMatrixSeq<Rat> empty(0, 0);
    CHECK(empty.at(3).rows() == 0);
}

TEST_CASE("cfm_mul") {
    auto mp = CFMatrixSeq<Rat>::const_power(fib_companion(), 1, 0);
    auto id = CFMatrixSeq<Rat>::constant(Matrix<Rat>::identity(2));
    auto prod = mp.mul(id);
    for (size_t n = 0; n < 24; ++n) CHECK(prod.at(n) == mp.at(n));

    auto cc = CFMatrixSeq<Rat>::constant(fib_companion()).mul(
        CFMatrixSeq<Rat>::constant(fib_companion()));
    CHECK(cc.at(5) == fib_companion() * fib_companion());

    // M^n * M^n agrees with M^{2n} termwise.
    auto sq = mp.mul(mp);
    auto m2 = CFMatrixSeq<Rat>::const_power(fib_companion(), 2, 0);
    for (size_t n = 0; n < 24; ++n) CHECK(sq.at(n) == m2.at(n));

    std::mt19937 rng(41);
    CFMatrixSeq<Rat> a(2, 2), b(2, 2);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) {
            a.entry(i, j) = random_seq(rng, 2);
            b.entry(i, j) = random_seq(rng, 2);
        }
    auto ab = a.mul(b);
    for (size_t n = 0; n < 64; ++n) CHECK(ab.at(n) == a.at(n) * b.at(n));
}

TEST_CASE("cfm_det_adjugate") {
    auto c = CFMatrixSeq<Rat>::constant(fib_companion());
    auto [det, adj] = c.det_adjugate();
    for (size_t n = 0; n < 8; ++n) CHECK(det.term(n) == Rat(-1));

    // det(M^n) = (-1)^n by multiplicativity.
    auto mp = CFMatrixSeq<Rat>::const_power(fib_companion(), 1, 0);
    auto [detn, adjn] = mp.det_adjugate();
    for (size_t n = 0; n < 32; ++n) {
        CHECK(detn.term(n) == (n % 2 ? Rat(-1) : Rat(1)));
        CHECK(detn.term(n) == mat_det(mp.at(n)));
        auto lhs = mp.at(n) * adjn.at(n);
        CHECK(lhs == Matrix<Rat>::identity(2).scaled(detn.term(n)));
    }

    // diag(indicator(2,0), indicator(2,1)) has identically zero determinant.
    CFMatrixSeq<Rat> d(2, 2);
    d.entry(0, 0) = Seq::indicator(2, 0);
    d.entry(1, 1) = Seq::indicator(2, 1);
    auto [dz, dzadj] = d.det_adjugate();
    CHECK(dz.is_zero());
}

TEST_CASE("const_power_seq") {
    auto mp = CFMatrixSeq<Rat>::const_power(fib_companion(), 1, 0);
    // Entry (0,0) of M^n is F_{n+1} (with F_1 = F_2 = 1).
    for (size_t n = 0; n < 16; ++n) CHECK(mp.entry(0, 0).term(n) == fib11().term(n));

    auto m21 = CFMatrixSeq<Rat>::const_power(fib_companion(), 2, 1);
    REQUIRE(m21.entry(0, 0).order() == 2);
    CHECK(m21.entry(0, 0).coeffs()[1] == Rat(3));
    CHECK(m21.entry(0, 0).coeffs()[0] == Rat(-1));

    auto neg = CFMatrixSeq<Rat>::const_power(fib_companion(), 1, -3);
    for (size_t n = 0; n < 3; ++n) CHECK(neg.at(n).is_zero());
    CHECK(neg.at(3) == Matrix<Rat>::identity(2));

    CHECK_THROWS_AS(CFMatrixSeq<Rat>::const_power(fib_companion(), 0, 1),
                    std::invalid_argument);

    // Power law against repeated squaring, all (c,d) in {1,2,3} x {-3..3}.
    std::mt19937 rng(43);
    for (long c = 1; c <= 3; ++c)
        for (long d = -3; d <= 3; ++d) {
            auto s = CFMatrixSeq<Rat>::const_power(fib_companion(), c, d);
            for (size_t n = 0; n < 32; ++n) {
                long e = c * long(n) + d;
                auto want = e >= 0 ? mat_pow(fib_companion(), (unsigned long)e)
                                   : Matrix<Rat>(2, 2);
                CHECK(s.at(n) == want);
            }
        }
}

TEST_CASE("cfm_inverse_on_residue") {
    auto c = CFMatrixSeq<Rat>::constant(fib_companion());
    auto [num, den] = c.inverse_on_residue(1, 0, 0);
    CHECK(den.term(4) == Rat(-1));
    CHECK(num.at(7) == mat_adjugate(fib_companion()));

    auto mp = CFMatrixSeq<Rat>::const_power(fib_companion(), 1, 0);
    auto [numn, denn] = mp.inverse_on_residue(1, 0, 0);
    for (size_t n = 0; n < 32; ++n)
        CHECK(mp.at(n) * numn.at(n) == Matrix<Rat>::identity(2).scaled(denn.term(n)));

    // Singular on the chosen residue class by construction.
    CFMatrixSeq<Rat> d(2, 2);
    d.entry(0, 0) = Seq::indicator(2, 0);
    d.entry(1, 1) = Seq::constant(Rat(1));
    CHECK_THROWS_AS(d.inverse_on_residue(2, 1, 0), certification_error);
}

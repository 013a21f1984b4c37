#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "c2seq/ring.hpp"

using namespace c2seq;

namespace {

Rat rr(long n, long d = 1) { return Rat(n, d); }

Matrix<Rat> random_rat_matrix(std::mt19937& rng, size_t n) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    Matrix<Rat> m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m(i, j) = Rat(num(rng), den(rng));
    return m;
}

// Permutation-expansion determinant, the brute-force oracle for small sizes.
Rat det_by_permutations(const Matrix<Rat>& a) {
    size_t n = a.rows();
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rat acc(0);
    do {
        size_t inversions = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Rat term(1);
        for (size_t i = 0; i < n; ++i) term *= a(i, perm[i]);
        acc += (inversions % 2) ? -term : term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

}  // namespace

TEST_CASE("rational arithmetic is exact and canonical") {
    CHECK(rr(1, 2) + rr(1, 3) == rr(5, 6));
    CHECK(rr(2, 4) == rr(1, 2));
    CHECK((rr(2, 4)).str() == "1/2");
    CHECK(rr(-4, -8) == rr(1, 2));
    CHECK(Rat::from_string("-7/3").str() == "-7/3");
    CHECK(rr(3) * rr(0) == rr(0));
    CHECK(rr(5, 3) / rr(5, 3) == rr(1));
    CHECK_THROWS_AS(rr(1) / rr(0), std::domain_error);
}

TEST_CASE("mpoly basics") {
    MPoly x = MPoly::var("x");
    MPoly p = (MPoly(1) + x) * (MPoly(1) + x);
    CHECK(p.str() == "1 + 2*x + x^2");
    CHECK(p == MPoly(1) + x.scaled(rr(2)) + x.pow(2));

    MPoly q = MPoly(1) + x.scaled(rr(3)) + x.pow(2);
    CHECK(q.eval({{"x", rr(1)}}) == rr(5));
    CHECK_THROWS_AS(q.eval({}), std::invalid_argument);

    // Unused variables are stripped: x + 0*y equals x.
    MPoly y = MPoly::var("y");
    CHECK(x + y - y == x);
    CHECK((x - x).is_zero());
    CHECK((x - x).str() == "0");
}

TEST_CASE("mpoly division and gcd") {
    MPoly x = MPoly::var("x"), y = MPoly::var("y");
    MPoly a = (x + y) * (x - y);
    auto q = a.divided_exactly_by(x + y);
    REQUIRE(q.has_value());
    CHECK(*q == x - y);
    CHECK(!a.divided_exactly_by(x + MPoly(1)).has_value());

    MPoly g = MPoly::gcd((x + y) * (x + MPoly(1)), (x + y) * (y + MPoly(2)));
    CHECK(g == x + y);

    // Monomial fast path.
    CHECK(MPoly::gcd(x.pow(3) * y, x.pow(2) * y.pow(2) + x.pow(4) * y) == x.pow(2) * y);

    // Univariate with rational coefficients.
    MPoly u = (x + MPoly(1)).pow(2) * (x - MPoly(3));
    MPoly v = (x + MPoly(1)) * (x + MPoly(5));
    CHECK(MPoly::gcd(u, v) == x + MPoly(1));
}

TEST_CASE("ratfunc canonical form and arithmetic") {
    MPoly x = MPoly::var("x");
    RatFunc f(x * x - MPoly(1), x + MPoly(1));
    CHECK(f == RatFunc(x - MPoly(1)));
    CHECK(f.is_polynomial());

    RatFunc g = RatFunc(MPoly(1), x) + RatFunc(MPoly(1), x);
    CHECK(g == RatFunc(MPoly(2), x));
    CHECK((g * RatFunc(x)).as_poly() == MPoly(2));
    CHECK_THROWS_AS(g / RatFunc(), std::domain_error);

    // den is normalized monic: (1+x)/(2x) has den x.
    RatFunc h(MPoly(1) + x, x.scaled(rr(2)));
    CHECK(h.den() == x);
    CHECK(h.num() == (MPoly(1) + x).scaled(rr(1, 2)));

    CHECK(h.eval({{"x", rr(2)}}) == rr(3, 4));
}

TEST_CASE("mat_det matches examples and brute force") {
    Matrix<Rat> fib(2, 2);
    fib(0, 0) = rr(1);
    fib(0, 1) = rr(1);
    fib(1, 0) = rr(1);
    CHECK(mat_det(fib) == rr(-1));

    CHECK(mat_det(Matrix<Rat>::identity(3)) == rr(1));

    Matrix<MPoly> m(2, 2);
    m(0, 0) = MPoly::var("X");
    m(0, 1) = MPoly::var("Y");
    m(1, 0) = MPoly(1);
    m(1, 1) = MPoly::var("X");
    CHECK(mat_det(m) == MPoly::var("X").pow(2) - MPoly::var("Y"));

    std::mt19937 rng(7);
    for (int rep = 0; rep < 40; ++rep) {
        size_t n = 1 + rep % 4;
        auto a = random_rat_matrix(rng, n);
        CHECK(mat_det(a) == det_by_permutations(a));
    }
    // Bareiss path (n > 4) against the permanent-style oracle.
    for (int rep = 0; rep < 5; ++rep) {
        auto a = random_rat_matrix(rng, 5);
        CHECK(detail::det_bareiss(a) == det_by_permutations(a));
    }
}

TEST_CASE("adjugate identity A adj(A) = det(A) I") {
    Matrix<Rat> fib(2, 2);
    fib(0, 0) = rr(1);
    fib(0, 1) = rr(1);
    fib(1, 0) = rr(1);
    auto adj = mat_adjugate(fib);
    CHECK(adj(0, 0) == rr(0));
    CHECK(adj(0, 1) == rr(-1));
    CHECK(adj(1, 0) == rr(-1));
    CHECK(adj(1, 1) == rr(1));

    CHECK(mat_adjugate(Matrix<Rat>::identity(4)) == Matrix<Rat>::identity(4));

    std::mt19937 rng(11);
    for (int rep = 0; rep < 25; ++rep) {
        size_t n = 1 + rep % 5;
        auto a = random_rat_matrix(rng, n);
        auto d = mat_det(a);
        CHECK(a * mat_adjugate(a) == Matrix<Rat>::identity(n).scaled(d));
    }
}

TEST_CASE("char_poly on companions and Cayley-Hamilton") {
    Matrix<Rat> fib(2, 2);
    fib(0, 0) = rr(1);
    fib(0, 1) = rr(1);
    fib(1, 0) = rr(1);
    auto cp = char_poly(fib);
    REQUIRE(cp.size() == 3);
    CHECK(cp[0] == rr(-1));
    CHECK(cp[1] == rr(-1));
    CHECK(cp[2] == rr(1));

    auto cp2 = char_poly(fib * fib);
    CHECK(cp2[0] == rr(1));
    CHECK(cp2[1] == rr(-3));
    CHECK(cp2[2] == rr(1));

    auto cpz = char_poly(Matrix<Rat>(2, 2));
    CHECK(cpz[0] == rr(0));
    CHECK(cpz[1] == rr(0));
    CHECK(cpz[2] == rr(1));

    std::mt19937 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        size_t n = 1 + rep % 5;
        auto a = random_rat_matrix(rng, n);
        auto e = char_poly(a);
        Matrix<Rat> acc(n, n);
        for (size_t t = 0; t < e.size(); ++t) acc = acc + mat_pow(a, t).scaled(e[t]);
        CHECK(acc.is_zero());
    }
}

TEST_CASE("linear solving utilities") {
    Matrix<Rat> a(3, 2);
    a(0, 0) = rr(1);
    a(0, 1) = rr(1);
    a(1, 0) = rr(1);
    a(1, 1) = rr(2);
    a(2, 0) = rr(2);
    a(2, 1) = rr(3);
    auto x = solve_linear(a, {rr(3), rr(5), rr(8)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == rr(1));
    CHECK((*x)[1] == rr(2));
    CHECK(!solve_linear(a, {rr(3), rr(5), rr(9)}).has_value());

    Matrix<Rat> b(1, 3);
    b(0, 0) = rr(1);
    b(0, 1) = rr(1);
    b(0, 2) = rr(1);
    CHECK(nullspace(b).size() == 2);
    CHECK(mat_rank(b) == 1);
}

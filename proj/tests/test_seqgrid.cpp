#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spps/seqgrid.hpp"

using spps::CoefficientSet;
using spps::Complex;
using spps::GaussianRational;
using spps::IndexWindow;
using spps::Sequence;

namespace {

GaussianRational gr(long num, long den = 1) {
    mpq_class q(num, den);
    q.canonicalize();
    return GaussianRational(q);
}

// Small random rational, never zero when nonzero_only is set.
GaussianRational rand_gr(std::mt19937_64& rng, bool nonzero_only = false) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    for (;;) {
        mpq_class re(num(rng), den(rng)), im(num(rng), den(rng));
        re.canonicalize();
        im.canonicalize();
        GaussianRational v(re, im);
        if (!nonzero_only || !v.is_zero()) return v;
    }
}

CoefficientSet<GaussianRational> rand_coeffs(std::mt19937_64& rng, int lo, int hi) {
    auto p = Sequence<GaussianRational>::generate(lo, hi - 1,
                                                  [&](int) { return rand_gr(rng, true); });
    auto q = Sequence<GaussianRational>::generate(lo + 1, hi, [&](int) { return rand_gr(rng); });
    auto r = Sequence<GaussianRational>::generate(lo + 1, hi, [&](int) { return rand_gr(rng); });
    return {IndexWindow(lo, hi), std::move(p), std::move(q), std::move(r)};
}

}  // namespace

TEST_CASE("window validation and membership") {
    CHECK_THROWS_AS(IndexWindow(0, 1), std::invalid_argument);
    IndexWindow w(-3, 4);
    CHECK(w.length() == 8);
    CHECK(w.contains(-3));
    CHECK(w.contains(4));
    CHECK(!w.contains(5));
    CHECK(w.interior(-2));
    CHECK(!w.interior(-3));
    CHECK(!w.interior(4));
}

TEST_CASE("sequence access is range-checked") {
    auto s = Sequence<Complex>::generate(2, 5, [](int n) { return Complex(n, 0); });
    CHECK(s.at(2) == Complex(2, 0));
    CHECK(s.at(5) == Complex(5, 0));
    CHECK_THROWS_AS(s.at(1), std::out_of_range);
    CHECK_THROWS_AS(s.at(6), std::out_of_range);
}

TEST_CASE("coefficient sets reject zero p and wrong ranges") {
    IndexWindow w(0, 4);
    auto ones = Sequence<Complex>::constant(0, 3, Complex(1));
    auto q = Sequence<Complex>::constant(1, 4, Complex(0));
    auto r = Sequence<Complex>::constant(1, 4, Complex(1));
    CHECK_NOTHROW(CoefficientSet<Complex>(w, ones, q, r));

    auto p_zero = Sequence<Complex>::generate(0, 3, [](int n) { return Complex(n == 2 ? 0 : 1); });
    CHECK_THROWS_AS(CoefficientSet<Complex>(w, p_zero, q, r), std::invalid_argument);

    auto p_short = Sequence<Complex>::constant(0, 2, Complex(1));
    CHECK_THROWS_AS(CoefficientSet<Complex>(w, p_short, q, r), std::invalid_argument);
}

TEST_CASE("forward difference examples") {
    auto c = Sequence<GaussianRational>::constant(0, 5, gr(7));
    for (int n = 0; n <= 4; ++n) CHECK(spps::delta(c, n) == gr(0));

    auto id = Sequence<GaussianRational>::generate(0, 5, [](int n) { return gr(n); });
    for (int n = 0; n <= 4; ++n) CHECK(spps::delta(id, n) == gr(1));

    auto sq = Sequence<GaussianRational>::generate(0, 5, [](int n) { return gr(n * n); });
    CHECK(spps::delta(sq, 3) == gr(7));  // 16 - 9
}

TEST_CASE("star sum normalization and branch values") {
    auto one = Sequence<GaussianRational>::constant(-4, 6, gr(1));
    CHECK(spps::star_sum(one, 0, 0) == gr(0));
    CHECK(spps::star_sum(one, 0, 3) == gr(3));
    CHECK(spps::star_sum(one, 0, -2) == gr(-2));

    auto id = Sequence<GaussianRational>::generate(-4, 6, [](int n) { return gr(n); });
    CHECK(spps::star_sum(id, 1, 4) == gr(6));    // 1 + 2 + 3
    CHECK(spps::star_sum(id, 1, -1) == gr(1));   // -(-1 + 0)
}

TEST_CASE("star sum is the indefinite sum vanishing at n0") {
    std::mt19937_64 rng(11);
    auto f = Sequence<GaussianRational>::generate(-5, 7, [&](int) { return rand_gr(rng); });
    for (int n0 : {-5, 0, 7}) {
        CHECK(spps::star_sum(f, n0, n0) == GaussianRational(0));
        // Delta_n (star sum) == f(n) on the whole range.
        for (int n = -5; n <= 6; ++n)
            CHECK(spps::star_sum(f, n0, n + 1) - spps::star_sum(f, n0, n) == f.at(n));
    }
}

TEST_CASE("difference operator examples") {
    // p == 1, q == 0: Delta^2 annihilates constants and linears.
    IndexWindow w(0, 6);
    CoefficientSet<GaussianRational> c(
        w, Sequence<GaussianRational>::constant(0, 5, gr(1)),
        Sequence<GaussianRational>::constant(1, 6, gr(0)),
        Sequence<GaussianRational>::constant(1, 6, gr(1)));
    auto lin = Sequence<GaussianRational>::generate(0, 6, [](int n) { return gr(3 * n - 2); });
    for (int n = 1; n <= 5; ++n) CHECK(spps::apply_jacobi(c, lin, gr(0), n) == gr(0));

    // u(n) = 2^n has Delta^2 u(n) = 2^(n-1) = u(n)/2, so it solves at lambda = 1/2.
    auto pw2 = Sequence<GaussianRational>::generate(0, 6, [](int n) { return gr(1L << n); });
    CHECK(spps::apply_jacobi(c, pw2, gr(1, 2), 3) == gr(0));
    CHECK(spps::apply_jacobi(c, pw2, gr(1), 3) == gr(-4));  // 4 - 1 * 8

    CHECK_THROWS_AS(spps::apply_jacobi(c, pw2, gr(1), 0), std::out_of_range);
    CHECK_THROWS_AS(spps::apply_jacobi(c, pw2, gr(1), 6), std::out_of_range);
}

TEST_CASE("operator application is linear in u") {
    std::mt19937_64 rng(23);
    auto c = rand_coeffs(rng, -2, 8);
    auto u = Sequence<GaussianRational>::generate(-2, 8, [&](int) { return rand_gr(rng); });
    auto v = Sequence<GaussianRational>::generate(-2, 8, [&](int) { return rand_gr(rng); });
    GaussianRational a = rand_gr(rng), b = rand_gr(rng), lam = rand_gr(rng);
    auto comb = Sequence<GaussianRational>::generate(
        -2, 8, [&](int n) { return a * u.at(n) + b * v.at(n); });
    for (int n = -1; n <= 7; ++n)
        CHECK(spps::apply_jacobi(c, comb, lam, n) ==
              a * spps::apply_jacobi(c, u, lam, n) + b * spps::apply_jacobi(c, v, lam, n));
}

TEST_CASE("relative residual scaling") {
    IndexWindow w(0, 4);
    CoefficientSet<Complex> c(w, Sequence<Complex>::constant(0, 3, Complex(1)),
                              Sequence<Complex>::constant(1, 4, Complex(0)),
                              Sequence<Complex>::constant(1, 4, Complex(1)));
    auto lin = Sequence<Complex>::generate(0, 4, [](int n) { return Complex(n, 0); });
    CHECK(spps::max_relative_residual(c, lin, Complex(0)) == 0.0);
    // A large non-solution still yields a bounded relative residual.
    auto big = Sequence<Complex>::generate(0, 4, [](int n) { return Complex(1e12 * (n % 2), 0); });
    CHECK(spps::max_relative_residual(c, big, Complex(0)) <= 1.0);
}

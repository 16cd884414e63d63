#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spps/oracle.hpp"
#include "spps/spectral.hpp"

using spps::BoundaryCondition;
using spps::CoefficientSet;
using spps::Complex;
using spps::GaussianRational;
using spps::IndexWindow;
using spps::Sequence;

namespace {

using GR = GaussianRational;

GR gr(long num, long den = 1) { return GR(mpq_class(num, den)); }

template <class S>
CoefficientSet<S> delta2(int lo, int hi) {
    using T = spps::ScalarTraits<S>;
    return {IndexWindow(lo, hi), Sequence<S>::constant(lo, hi - 1, T::from_int(1)),
            Sequence<S>::constant(lo + 1, hi, T::from_int(0)),
            Sequence<S>::constant(lo + 1, hi, T::from_int(1))};
}

template <class S>
spps::SppsTable<S> table_with_unit_seed(const CoefficientSet<S>& c, int n0) {
    using T = spps::ScalarTraits<S>;
    auto seed = spps::certify_seed(
        c, T::from_int(0),
        Sequence<S>::constant(c.window().lo, c.window().hi, T::from_int(1)));
    return spps::build_table(c, seed, n0, spps::default_max_order(c.window(), n0));
}

template <class S>
BoundaryCondition<S> dirichlet(int left_site, int right_site) {
    using T = spps::ScalarTraits<S>;
    BoundaryCondition<S> bc;
    bc.left.alpha = T::from_int(1);
    bc.left.site = left_site;
    bc.right.beta = T::from_int(1);
    bc.right.site = right_site;
    return bc;
}

std::vector<double> delta2_dirichlet_eigs(int N) {
    std::vector<double> out;
    for (int k = 1; k <= N - 1; ++k) {
        double s = std::sin(k * std::numbers::pi / (2.0 * N));
        out.push_back(-4.0 * s * s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("boundary condition validation") {
    IndexWindow w(0, 6);
    auto bc = dirichlet<Complex>(0, 5);
    CHECK_NOTHROW(bc.validate(w));

    auto degen = bc;
    degen.left.alpha = Complex(0);
    CHECK_THROWS_AS(degen.validate(w), std::invalid_argument);

    auto outside = bc;
    outside.right.site = 6;
    CHECK_THROWS_AS(outside.validate(w), std::out_of_range);

    auto swapped = bc;
    swapped.left.site = 5;
    swapped.right.site = 0;
    CHECK_THROWS_AS(swapped.validate(w), std::invalid_argument);

    auto affine = bc;
    affine.left.alpha_slope = Complex(1);
    CHECK(affine.left.lambda_dependent());
    CHECK(!bc.left.lambda_dependent());
}

TEST_CASE("polynomial helpers") {
    using V = std::vector<GR>;
    CHECK(spps::poly::mul(V{gr(1), gr(2)}, V{gr(3), gr(4)}) == V{gr(3), gr(10), gr(8)});
    CHECK(spps::poly::add(V{gr(1)}, V{gr(0), gr(5)}, gr(2)) == V{gr(1), gr(10)});
    V c{gr(1), gr(0), gr(0)};
    spps::poly::trim(c);
    CHECK(c == V{gr(1)});
}

TEST_CASE("root finder on fixed polynomials") {
    auto roots = spps::find_roots({Complex(-2), Complex(1)});
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0] - Complex(2)) < 1e-12);

    roots = spps::find_roots({Complex(1), Complex(0), Complex(1)});  // x^2 + 1
    REQUIRE(roots.size() == 2);
    for (Complex want : {Complex(0, -1), Complex(0, 1)}) {
        double best = 1e300;
        for (const Complex& z : roots) best = std::min(best, std::abs(z - want));
        CHECK(best < 1e-10);
    }

    // (x - 1)(x - 2)(x - 3) with a zero root factored in front.
    roots = spps::find_roots({Complex(0), Complex(-6), Complex(11), Complex(-6), Complex(1)});
    REQUIRE(roots.size() == 4);
    CHECK(std::abs(roots[0]) == 0.0);
    CHECK(std::abs(roots[1] - Complex(1)) < 1e-10);
    CHECK(std::abs(roots[3] - Complex(3)) < 1e-10);

    CHECK_THROWS_AS(spps::find_roots({Complex(1)}), std::invalid_argument);
}

TEST_CASE("root finder residuals on random polynomials") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int deg = 2 + static_cast<int>(rng() % 8);
        std::vector<Complex> cs(static_cast<size_t>(deg + 1));
        for (auto& v : cs) v = Complex(d(rng), d(rng));
        cs.back() += Complex(2.0);  // keep it comfortably non-degenerate
        auto roots = spps::find_roots(cs);
        CHECK(roots.size() == static_cast<size_t>(deg));
        for (const Complex& z : roots) {
            Complex val(0);
            for (auto it = cs.rbegin(); it != cs.rend(); ++it) val = val * z + *it;
            CHECK(std::abs(val) < 1e-8);
        }
    }
}

TEST_CASE("characteristic polynomial structure for a left Dirichlet condition") {
    // With u(n0) pinned to zero on the left, the determinant collapses to
    // u0(n0) times the right functional of u2.
    auto c = delta2<GR>(0, 8);
    auto t = table_with_unit_seed(c, 0);
    auto u1 = spps::assemble_u1(t);
    auto u2 = spps::assemble_u2(t);
    auto bc = dirichlet<GR>(0, 7);
    auto cp = spps::char_poly(u1, u2, bc);
    std::vector<GR> expect = u2.site(8);  // right functional = u2(8), scaled by u0(0) = 1
    spps::poly::trim(expect);
    CHECK(cp.coeffs == expect);
    CHECK(cp.degree() == 7);
}

TEST_CASE("second-difference Dirichlet eigenvalues match the closed form") {
    for (int N : {4, 8}) {
        auto c = delta2<Complex>(0, N);
        auto t = table_with_unit_seed(c, 0);
        auto bc = dirichlet<Complex>(0, N - 1);
        auto res = spps::solve_eigen(c, t, bc);
        auto expect = delta2_dirichlet_eigs(N);
        REQUIRE(res.eigenvalues.size() == expect.size());
        for (size_t i = 0; i < expect.size(); ++i) {
            CHECK(std::abs(res.eigenvalues[i] - Complex(expect[i])) < 1e-10);
            CHECK(res.residuals[i] < 1e-10);
            CHECK(res.boundary_errors[i] < 1e-8);
            CHECK(!res.multiplicity_flags[i]);
        }
    }
}

TEST_CASE("eigenfunction of the known mode and rejection off the spectrum") {
    auto c = delta2<Complex>(0, 4);
    auto t = table_with_unit_seed(c, 0);
    auto u1 = spps::assemble_u1(t);
    auto u2 = spps::assemble_u2(t);
    auto bc = dirichlet<Complex>(0, 3);

    auto f = spps::eigenfunction(u1, u2, bc, Complex(-2.0));
    // Eigenvector at lambda = -2: proportional to sin(pi n / 2) = (0,1,0,-1,0).
    CHECK(std::abs(f.at(0)) < 1e-12);
    CHECK(std::abs(f.at(2)) < 1e-12);
    CHECK(std::abs(f.at(4)) < 1e-12);
    CHECK(std::abs(f.at(1) + f.at(3)) < 1e-12);
    CHECK(std::abs(std::abs(f.at(1)) - 1.0) < 1e-12);

    CHECK_THROWS_AS(spps::eigenfunction(u1, u2, bc, Complex(-0.7)), std::runtime_error);
}

TEST_CASE("shooting oracle agrees with the closed form") {
    auto c = delta2<Complex>(0, 4);
    auto bc = dirichlet<Complex>(0, 3);
    auto eigs = spps::oracle::shooting_eigen_real(c, bc, -4.5, 0.5, 64);
    auto expect = delta2_dirichlet_eigs(4);
    REQUIRE(eigs.size() == expect.size());
    for (size_t i = 0; i < expect.size(); ++i) CHECK(std::abs(eigs[i] - expect[i]) < 1e-9);

    // A window with no sign change yields no roots.
    CHECK(spps::oracle::shooting_eigen_real(c, bc, 1.0, 2.0, 16).empty());
}

TEST_CASE("lambda-affine boundary condition reproduces the Laguerre spectrum") {
    // p(n) = n+1, q == 0, r == -1, left condition (lambda - 1) u(0) + u(1) = 0,
    // right condition u(N) = 0: the characteristic polynomial is proportional
    // to the degree-N Laguerre polynomial.
    const int N = 8;
    CoefficientSet<GR> c(IndexWindow(0, N),
                         Sequence<GR>::generate(0, N - 1, [](int n) { return gr(n + 1); }),
                         Sequence<GR>::constant(1, N, gr(0)),
                         Sequence<GR>::constant(1, N, gr(-1)));
    auto t = table_with_unit_seed(c, 0);
    BoundaryCondition<GR> bc;
    bc.left.alpha = gr(-1);
    bc.left.alpha_slope = gr(1);
    bc.left.beta = gr(1);
    bc.left.site = 0;
    bc.right.beta = gr(1);
    bc.right.site = N - 1;
    auto cp = spps::char_poly(spps::assemble_u1(t), spps::assemble_u2(t), bc);
    REQUIRE(cp.degree() == N);

    // Exact ratio check against sum_k C(N,k)(-lambda)^k / k!.
    GR scale = cp.coeffs[0];  // constant term of the closed form is 1
    GR binom = gr(1);
    GR kfact = gr(1);
    for (int k = 0; k <= N; ++k) {
        GR expect = binom / kfact;
        if (k % 2 == 1) expect = -expect;
        CHECK(cp.coeffs[static_cast<size_t>(k)] == scale * expect);
        binom = binom * gr(N - k) / gr(k + 1);
        kfact *= gr(k + 1);
    }

    // Roots of the exact polynomial are the classical Laguerre zeros: all
    // real, positive, and they annihilate the closed form numerically.
    auto roots = spps::find_roots(spps::to_complex_coeffs(cp));
    REQUIRE(roots.size() == static_cast<size_t>(N));
    for (const Complex& z : roots) {
        CHECK(std::abs(z.imag()) < 1e-8);
        CHECK(z.real() > 0.0);
        CHECK(std::abs(spps::laguerre_closed_form<Complex>(N, z)) < 1e-7);
    }
}

TEST_CASE("degenerate characteristic polynomial yields an empty spectrum") {
    // Conditions u(1) = 0 and u(2) = 0 around the base point n0 = 1: both
    // functionals are constant in lambda, the determinant is the constant 1,
    // and there is no spectrum.
    auto c = delta2<Complex>(0, 2);
    auto t = table_with_unit_seed(c, 1);
    BoundaryCondition<Complex> bc;
    bc.left.beta = Complex(1);
    bc.left.site = 0;
    bc.right.beta = Complex(1);
    bc.right.site = 1;
    auto res = spps::solve_eigen(c, t, bc);
    CHECK(res.eigenvalues.empty());
}

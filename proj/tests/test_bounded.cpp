#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spps/bounded.hpp"
#include "spps/oracle.hpp"

using spps::CoefficientSet;
using spps::Complex;
using spps::GaussianRational;
using spps::IndexWindow;
using spps::Sequence;

namespace {

using GR = GaussianRational;

GR gr(long num, long den = 1) {
    mpq_class q(num, den);
    q.canonicalize();
    return GR(q);
}

GR rand_gr(std::mt19937_64& rng, bool nonzero_only = false) {
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(1, 3);
    for (;;) {
        mpq_class re(num(rng), den(rng)), im(num(rng), den(rng));
        re.canonicalize();
        im.canonicalize();
        GR v(re, im);
        if (!nonzero_only || !v.is_zero()) return v;
    }
}

// q == 0 instance with u0 == 1 certified at lambda0 = 0.
template <class S, class P, class R>
std::pair<CoefficientSet<S>, spps::SppsTable<S>> sl1_instance(int lo, int hi, P&& pf, R&& rf) {
    using T = spps::ScalarTraits<S>;
    CoefficientSet<S> c(IndexWindow(lo, hi), Sequence<S>::generate(lo, hi - 1, pf),
                        Sequence<S>::constant(lo + 1, hi, T::from_int(0)),
                        Sequence<S>::generate(lo + 1, hi, rf));
    auto seed = spps::certify_seed(c, T::from_int(0),
                                   Sequence<S>::constant(lo, hi, T::from_int(1)));
    auto t = spps::build_table(c, seed, lo, spps::default_max_order(c.window(), lo));
    return {std::move(c), std::move(t)};
}

Complex pow2(int n) { return Complex(std::ldexp(1.0, n), 0.0); }

}  // namespace

TEST_CASE("iterated-sum operator reproduces the even first-kind tables") {
    std::mt19937_64 rng(3);
    auto [c, t] = sl1_instance<GR>(
        0, 14, [&](int) { return rand_gr(rng, true); }, [&](int) { return rand_gr(rng); });
    for (int k = 1; 2 * k <= t.max_order && k <= 5; ++k)
        for (int n = 2; n <= 14; ++n)
            CHECK(spps::bounded::op_T(c, t.x(2 * k - 2), 0, n) == t.x(2 * k).at(n));
    CHECK_THROWS_AS(spps::bounded::op_T(c, t.x(0), 0, 1), std::out_of_range);
    CHECK_THROWS_AS(spps::bounded::op_T(c, t.x(0), 0, 15), std::out_of_range);
}

TEST_CASE("companion operator reproduces the odd and second-kind tables") {
    std::mt19937_64 rng(4);
    auto [c, t] = sl1_instance<GR>(
        0, 14, [&](int) { return rand_gr(rng, true); }, [&](int) { return rand_gr(rng); });
    for (int n = 1; n <= 14; ++n) {
        for (int k = 1; 2 * k + 1 <= t.max_order && k <= 5; ++k)
            CHECK(spps::bounded::op_T_tilde(c, t.x(2 * k - 1), 0, n) == t.x(2 * k + 1).at(n));
        for (int k = 0; 2 * k + 2 <= t.max_order && k <= 5; ++k)
            CHECK(spps::bounded::op_T_tilde(c, t.y(2 * k), 0, n) == t.y(2 * k + 2).at(n));
    }
    CHECK_THROWS_AS(spps::bounded::op_T_tilde(c, t.x(1), 0, 0), std::out_of_range);
}

TEST_CASE("quasi-derivative of the first solution telescopes into odd tables") {
    std::mt19937_64 rng(6);
    auto [c, t] = sl1_instance<GR>(
        0, 12, [&](int) { return rand_gr(rng, true); }, [&](int) { return rand_gr(rng); });
    auto u1 = spps::eval_solution(spps::assemble_u1(t), gr(2));
    for (int n = 0; n <= 11; ++n) {
        GR expect = gr(0);
        GR xk = gr(1);
        for (int k = 1; 2 * k - 1 <= t.max_order; ++k) {
            xk *= gr(2);
            expect += xk * t.x(2 * k - 1).at(n);
        }
        CHECK(spps::bounded::quasi_derivative(c, u1, n) == expect);
    }
    auto flat = Sequence<GR>::constant(0, 12, gr(9));
    CHECK(spps::bounded::quasi_derivative(c, flat, 5) == GR(0));
}

TEST_CASE("necessary diagnostics: geometric weight stays summable") {
    IndexWindow w(0, 60);
    CoefficientSet<Complex> c(w, Sequence<Complex>::generate(0, 59, [](int n) { return pow2(n); }),
                              Sequence<Complex>::constant(1, 60, Complex(0)),
                              Sequence<Complex>::constant(1, 60, Complex(1)));
    auto [dbl, inv] = spps::bounded::necessary_diagnostic(c);
    CHECK(dbl.monotone);
    CHECK(inv.monotone);
    CHECK(inv.last() <= 1.0);
    CHECK(dbl.last() <= 2.0);
    CHECK(!dbl.practically_divergent(25.0));
    CHECK(!inv.practically_divergent(25.0));
}

TEST_CASE("necessary diagnostics: constant weight flags divergence") {
    IndexWindow w(0, 60);
    CoefficientSet<Complex> c(w, Sequence<Complex>::constant(0, 59, Complex(1)),
                              Sequence<Complex>::constant(1, 60, Complex(0)),
                              Sequence<Complex>::constant(1, 60, Complex(1)));
    auto [dbl, inv] = spps::bounded::necessary_diagnostic(c);
    CHECK(inv.last() == doctest::Approx(59.0));
    CHECK(inv.practically_divergent(25.0));
    CHECK(dbl.practically_divergent(25.0));

    // And indeed the equation Delta^2 u = u has an exponentially growing solution.
    auto u = spps::oracle::oracle_solution(c, Complex(1), Complex(1), Complex(2));
    CHECK(std::abs(u.at(60)) > 1e10);
}

TEST_CASE("necessary diagnostics can disagree: only the double series diverges") {
    IndexWindow w(0, 2000);
    CoefficientSet<Complex> c(
        w, Sequence<Complex>::generate(0, 1999, [](int n) { return Complex((n + 1.0) * (n + 1.0)); }),
        Sequence<Complex>::constant(1, 2000, Complex(0)),
        Sequence<Complex>::constant(1, 2000, Complex(1)));
    auto [dbl, inv] = spps::bounded::necessary_diagnostic(c);
    CHECK(inv.last() < 1.7);       // partial sums of sum 1/(n+1)^2
    CHECK(dbl.last() > 5.0);       // harmonic-type growth
    CHECK(dbl.practically_divergent(5.0));
    CHECK(!inv.practically_divergent(5.0));
}

TEST_CASE("necessary diagnostics enforce the sign preconditions") {
    IndexWindow w(0, 5);
    auto q = Sequence<Complex>::constant(1, 5, Complex(0));
    auto r_neg = Sequence<Complex>::constant(1, 5, Complex(-1));
    auto r_ok = Sequence<Complex>::constant(1, 5, Complex(1));
    auto p_ok = Sequence<Complex>::constant(0, 4, Complex(1));
    auto p_cplx = Sequence<Complex>::constant(0, 4, Complex(1, 1));
    CHECK_THROWS_AS(spps::bounded::necessary_diagnostic(CoefficientSet<Complex>(w, p_ok, q, r_neg)),
                    std::invalid_argument);
    CHECK_THROWS_AS(spps::bounded::necessary_diagnostic(CoefficientSet<Complex>(w, p_cplx, q, r_ok)),
                    std::invalid_argument);
}

TEST_CASE("contraction certificate for the geometric weight") {
    auto [c, t] = sl1_instance<Complex>(
        0, 60, [](int n) { return pow2(n); }, [](int) { return Complex(1); });
    auto cert = spps::bounded::sufficiency_certificate(c, t, 60);
    REQUIRE(cert.valid);
    CHECK(cert.delta <= 0.9);
    CHECK(cert.n_star <= 4);
    // Soundness: the certified bound dominates both basis solutions at lambda = 1.
    auto u1 = spps::eval_solution(spps::assemble_u1(t), Complex(1));
    auto u2 = spps::eval_solution(spps::assemble_u2(t), Complex(1));
    for (int n = 0; n <= 60; ++n) {
        CHECK(std::abs(u1.at(n)) <= cert.solution_bound * (1 + 1e-12));
        CHECK(std::abs(u2.at(n)) <= cert.solution_bound * (1 + 1e-12));
    }
}

TEST_CASE("contraction certificate fails for the constant weight") {
    auto [c, t] = sl1_instance<Complex>(
        0, 30, [](int) { return Complex(1); }, [](int) { return Complex(1); });
    auto cert = spps::bounded::sufficiency_certificate(c, t, 30);
    CHECK(!cert.valid);
    auto phi = spps::bounded::phi_bounded_certificate(c, t, 30);
    CHECK(!phi.valid);
}

TEST_CASE("certificates respect the table preconditions") {
    auto [c, t] = sl1_instance<Complex>(
        0, 10, [](int n) { return pow2(n); }, [](int) { return Complex(1); });
    CHECK_THROWS_AS(spps::bounded::sufficiency_certificate(c, t, 11), std::out_of_range);
    CHECK_THROWS_AS(spps::bounded::sufficiency_certificate(c, t, 1), std::out_of_range);

    // Nonzero q disqualifies the corollary form.
    CoefficientSet<Complex> cq(IndexWindow(0, 10),
                               Sequence<Complex>::generate(0, 9, [](int n) { return pow2(n); }),
                               Sequence<Complex>::constant(1, 10, Complex(1)),
                               Sequence<Complex>::constant(1, 10, Complex(1)));
    auto seed = spps::build_seed_complex(cq, Complex(0));
    auto tq = spps::build_table(cq, seed, 0, spps::default_max_order(cq.window(), 0),
                                std::max(1e-10, seed.residual_bound));
    CHECK_THROWS_AS(spps::bounded::sufficiency_certificate(cq, tq, 10), std::invalid_argument);
}

TEST_CASE("quasi-derivative certificate") {
    // Geometric weight: valid on the window with an explicit bound on phi.
    auto [c, t] = sl1_instance<Complex>(
        0, 60, [](int n) { return pow2(n); }, [](int) { return Complex(1); });
    auto cert = spps::bounded::phi_bounded_certificate(c, t, 60);
    REQUIRE(cert.valid);
    CHECK(cert.delta <= 0.9);
    auto u1 = spps::eval_solution(spps::assemble_u1(t), Complex(1));
    auto u2 = spps::eval_solution(spps::assemble_u2(t), Complex(1));
    for (int n = 0; n <= 59; ++n) {
        CHECK(std::abs(spps::bounded::quasi_derivative(c, u1, n)) <=
              cert.solution_bound * (1 + 1e-12));
        CHECK(std::abs(spps::bounded::quasi_derivative(c, u2, n)) <=
              cert.solution_bound * (1 + 1e-12));
    }

    // r == 0 makes the companion tail vanish identically: phi is constant.
    auto [c0, t0] = sl1_instance<Complex>(
        0, 20, [](int) { return Complex(1); }, [](int) { return Complex(0); });
    auto cert0 = spps::bounded::phi_bounded_certificate(c0, t0, 20);
    REQUIRE(cert0.valid);
    CHECK(cert0.delta == 0.0);
}

TEST_CASE("contraction certificate with complex geometric weight") {
    Complex base = std::polar(2.0, 1.0);
    auto [c, t] = sl1_instance<Complex>(
        0, 60, [base](int n) { return std::pow(base, n); }, [](int) { return Complex(1); });
    auto cert = spps::bounded::sufficiency_certificate(c, t, 60);
    REQUIRE(cert.valid);
    auto u1 = spps::eval_solution(spps::assemble_u1(t), Complex(1));
    auto u2 = spps::eval_solution(spps::assemble_u2(t), Complex(1));
    for (int n = 0; n <= 60; ++n) {
        CHECK(std::abs(u1.at(n)) <= cert.solution_bound * (1 + 1e-12));
        CHECK(std::abs(u2.at(n)) <= cert.solution_bound * (1 + 1e-12));
    }
    // The necessary-condition diagnostics refuse complex data outright.
    CHECK_THROWS_AS(spps::bounded::necessary_diagnostic(c), std::invalid_argument);
}

#pragma once

#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spps/seqgrid.hpp"

namespace spps {

struct NonRealCoefficients : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeedNotFound : std::runtime_error {
    SeedNotFound(std::string msg, int vanish_index)
        : std::runtime_error(std::move(msg)), vanish_index(vanish_index) {}
    int vanish_index;
};

/// A certified nonvanishing solution u0 of the lambda0 equation.
/// residual_bound is the measured max |apply_jacobi| over the interior
/// (exactly zero in rational mode); min_abs > 0 certifies nonvanishing.
template <class S>
struct SeedSolution {
    Sequence<S> u0;
    S lambda0;
    double residual_bound = 0.0;
    double min_abs = 0.0;
};

/// Unique solution of the three-term recurrence with u(n_init) = a,
/// u(n_init+1) = b, filled over the whole window in both directions.
template <class S>
Sequence<S> solve_recurrence_from(const CoefficientSet<S>& c, const S& lam, int n_init, const S& a,
                                  const S& b) {
    const IndexWindow& w = c.window();
    if (n_init < w.lo || n_init + 1 > w.hi)
        throw std::out_of_range("solve_recurrence_from: init pair outside window");
    std::vector<S> vals(static_cast<size_t>(w.length()), ScalarTraits<S>::from_int(0));
    auto ref = [&](int n) -> S& { return vals[static_cast<size_t>(n - w.lo)]; };
    ref(n_init) = a;
    ref(n_init + 1) = b;
    // Equation at n: p(n)(u(n+1)-u(n)) - p(n-1)(u(n)-u(n-1)) + (q(n)-lam r(n))u(n) = 0.
    for (int n = n_init + 1; n <= w.hi - 1; ++n)
        ref(n + 1) = ref(n) + (c.p().at(n - 1) * (ref(n) - ref(n - 1)) -
                               (c.q().at(n) - lam * c.r().at(n)) * ref(n)) /
                                  c.p().at(n);
    for (int n = n_init; n >= w.lo + 1; --n)
        ref(n - 1) = ref(n) - (c.p().at(n) * (ref(n + 1) - ref(n)) +
                               (c.q().at(n) - lam * c.r().at(n)) * ref(n)) /
                                  c.p().at(n - 1);
    return Sequence<S>(w.lo, std::move(vals));
}

/// Forward recurrence with initial data at the left edge (lo, lo+1).
template <class S>
Sequence<S> solve_recurrence(const CoefficientSet<S>& c, const S& lam, const S& v_lo, const S& v_lo1) {
    return solve_recurrence_from(c, lam, c.window().lo, v_lo, v_lo1);
}

namespace detail {

template <class S>
SeedSolution<S> certify(const CoefficientSet<S>& c, const S& lambda0, Sequence<S> u0) {
    double min_abs = std::numeric_limits<double>::infinity();
    int vanish = c.window().lo - 1;
    for (int n = c.window().lo; n <= c.window().hi; ++n) {
        if (ScalarTraits<S>::is_zero(u0.at(n))) {
            min_abs = 0.0;
            vanish = n;
            break;
        }
        min_abs = std::min(min_abs, ScalarTraits<S>::abs_value(u0.at(n)));
    }
    if (min_abs <= 0.0)
        throw SeedNotFound("seed vanishes at n = " + std::to_string(vanish), vanish);
    double res = 0.0;
    for (int n = c.window().lo + 1; n <= c.window().hi - 1; ++n)
        res = std::max(res, ScalarTraits<S>::abs_value(apply_jacobi(c, u0, lambda0, n)));
    return SeedSolution<S>{std::move(u0), lambda0, res, min_abs};
}

}  // namespace detail

/// Certify a caller-supplied seed sequence (e.g. a constant u0 == 1).
/// Throws SeedNotFound if it vanishes anywhere on the window.
template <class S>
SeedSolution<S> certify_seed(const CoefficientSet<S>& c, const S& lambda0, Sequence<S> u0) {
    if (u0.lo() != c.window().lo || u0.hi() != c.window().hi)
        throw std::invalid_argument("certify_seed: u0 must cover the full window");
    return detail::certify(c, lambda0, std::move(u0));
}

/// Nonvanishing seed for real p and real q - lambda0 r: two independent real
/// solutions u, v never vanish simultaneously (their Casoratian is a nonzero
/// p-weighted constant), so u + iv works. Initial data defaults to (1,0) and
/// (0,1) at (lo, lo+1), giving Casoratian 1 at lo.
template <class S>
SeedSolution<S> build_seed_complex(const CoefficientSet<S>& c, const S& lambda0,
                                   std::pair<S, S> init_u = {ScalarTraits<S>::from_int(1),
                                                             ScalarTraits<S>::from_int(0)},
                                   std::pair<S, S> init_v = {ScalarTraits<S>::from_int(0),
                                                             ScalarTraits<S>::from_int(1)}) {
    using T = ScalarTraits<S>;
    const IndexWindow& w = c.window();
    for (int n = w.lo; n <= w.hi - 1; ++n)
        if (!T::is_real(c.p().at(n)))
            throw NonRealCoefficients("build_seed_complex: p not real at n = " + std::to_string(n));
    for (int n = w.lo + 1; n <= w.hi; ++n)
        if (!T::is_real(c.q().at(n) - lambda0 * c.r().at(n)))
            throw NonRealCoefficients("build_seed_complex: q - lambda0*r not real at n = " +
                                      std::to_string(n));
    if (!T::is_real(init_u.first) || !T::is_real(init_u.second) || !T::is_real(init_v.first) ||
        !T::is_real(init_v.second))
        throw std::invalid_argument("build_seed_complex: initial data must be real");
    Sequence<S> u = solve_recurrence(c, lambda0, init_u.first, init_u.second);
    Sequence<S> v = solve_recurrence(c, lambda0, init_v.first, init_v.second);
    const S i_unit = [] {
        if constexpr (T::exact)
            return S(mpq_class(0), mpq_class(1));
        else
            return S(0.0, 1.0);
    }();
    Sequence<S> u0 =
        Sequence<S>::generate(w.lo, w.hi, [&](int n) { return u.at(n) + i_unit * v.at(n); });
    return detail::certify(c, lambda0, std::move(u0));
}

/// Randomized-search fallback for genuinely complex coefficients (a case the
/// representation theory leaves open). Deterministic per generator state;
/// keeps the candidate with the largest min |u0|.
template <class S>
SeedSolution<S> build_seed_search(const CoefficientSet<S>& c, const S& lambda0, int attempts,
                                  std::mt19937_64& rng) {
    if (attempts < 1) throw std::invalid_argument("build_seed_search: attempts must be >= 1");
    using T = ScalarTraits<S>;
    std::uniform_int_distribution<int> num(-8, 8);
    auto rand_scalar = [&]() -> S {
        if constexpr (T::exact) {
            mpq_class re(num(rng), 1 + std::abs(num(rng)) % 3);
            mpq_class im(num(rng), 1 + std::abs(num(rng)) % 3);
            re.canonicalize();
            im.canonicalize();
            return S(std::move(re), std::move(im));
        } else {
            std::uniform_real_distribution<double> d(-1.0, 1.0);
            double re = d(rng), im = d(rng);
            return S(re, im);
        }
    };
    bool have_best = false;
    SeedSolution<S> best;
    int last_vanish = c.window().lo;
    for (int t = 0; t < attempts; ++t) {
        S a = rand_scalar(), b = rand_scalar();
        if (T::is_zero(a) && T::is_zero(b)) continue;
        try {
            SeedSolution<S> cand = detail::certify(c, lambda0, solve_recurrence(c, lambda0, a, b));
            if (!have_best || cand.min_abs > best.min_abs) {
                best = std::move(cand);
                have_best = true;
            }
        } catch (const SeedNotFound& e) {
            last_vanish = e.vanish_index;
        }
    }
    if (!have_best)
        throw SeedNotFound("build_seed_search: all " + std::to_string(attempts) +
                               " candidates vanished (last at n = " + std::to_string(last_vanish) + ")",
                           last_vanish);
    return best;
}

/// Pointwise Polya-factorization residual through the seed:
///   (1/u0(n)) Delta[p(n-1) u0(n-1) u0(n) Delta(u(n-1)/u0(n-1))] - (lam-lam0) r(n) u(n).
/// Identical to apply_jacobi(c, u, lam, n) whenever the seed solves its
/// lambda0 equation exactly.
template <class S>
S polya_residual(const CoefficientSet<S>& c, const SeedSolution<S>& s, const Sequence<S>& u,
                 const S& lam, int n) {
    if (!c.window().interior(n))
        throw std::out_of_range("polya_residual: n = " + std::to_string(n) + " not interior");
    const Sequence<S>& u0 = s.u0;
    auto ratio_delta = [&](int m) {  // Delta(u/u0)(m)
        return u.at(m + 1) / u0.at(m + 1) - u.at(m) / u0.at(m);
    };
    S inner_hi = c.p().at(n) * u0.at(n) * u0.at(n + 1) * ratio_delta(n);
    S inner_lo = c.p().at(n - 1) * u0.at(n - 1) * u0.at(n) * ratio_delta(n - 1);
    return (inner_hi - inner_lo) / u0.at(n) - (lam - s.lambda0) * c.r().at(n) * u.at(n);
}

/// Discrete Wronskian: W(u,v)(n) = u(n)v(n+1) - u(n+1)v(n).
template <class S>
S casoratian(const Sequence<S>& u, const Sequence<S>& v, int n) {
    return u.at(n) * v.at(n + 1) - u.at(n + 1) * v.at(n);
}

}  // namespace spps

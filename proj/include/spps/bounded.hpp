#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "spps/table.hpp"

namespace spps {
namespace bounded {

/// Iterated-sum operator from the u0 == 1 corollary:
///   T u(n) = sum_{s=n0+1}^{n-1} sum_{tau=n0+1}^{s} u(tau) r(tau) / p(s),  n > n0+1.
/// T(1) reproduces X^(2) and T(X^(2k-2)) = X^(2k).
template <class S>
S op_T(const CoefficientSet<S>& c, const Sequence<S>& u, int n0, int n) {
    if (n <= n0 + 1) throw std::out_of_range("op_T: requires n > n0+1");
    if (n > c.window().hi || n0 < c.window().lo) throw std::out_of_range("op_T: range outside window");
    S acc = ScalarTraits<S>::from_int(0);
    S inner = ScalarTraits<S>::from_int(0);
    for (int s = n0 + 1; s <= n - 1; ++s) {
        inner += u.at(s) * c.r().at(s);
        acc += inner / c.p().at(s);
    }
    return acc;
}

/// Companion operator driving the quasi-derivative criterion:
///   T~ u(n) = sum_{s=n0}^{n-1} sum_{tau=n0}^{s} r(s+1) u(tau) / p(tau),  n > n0.
/// Satisfies X^(2k+1) = T~(X^(2k-1)) and Y^(2k+2) = T~(Y^(2k)).
template <class S>
S op_T_tilde(const CoefficientSet<S>& c, const Sequence<S>& u, int n0, int n) {
    if (n <= n0) throw std::out_of_range("op_T_tilde: requires n > n0");
    if (n > c.window().hi || n0 < c.window().lo)
        throw std::out_of_range("op_T_tilde: range outside window");
    S acc = ScalarTraits<S>::from_int(0);
    S inner = ScalarTraits<S>::from_int(0);
    for (int s = n0; s <= n - 1; ++s) {
        inner += u.at(s) / c.p().at(s);
        acc += inner * c.r().at(s + 1);
    }
    return acc;
}

/// phi(n) = p(n) (u(n+1) - u(n)), the discrete analogue of p u'.
template <class S>
S quasi_derivative(const CoefficientSet<S>& c, const Sequence<S>& u, int n) {
    if (n < c.window().lo || n + 1 > c.window().hi)
        throw std::out_of_range("quasi_derivative: index outside window");
    return c.p().at(n) * (u.at(n + 1) - u.at(n));
}

enum class SeriesKind { inv_p, double_rp, double_shifted };

/// Window partial sums of one of the three series the boundedness results
/// inspect. The decision contract is explicit: growth past a caller threshold
/// is "practical divergence" on this window, never a proof.
struct SeriesDiagnostic {
    SeriesKind kind;
    int start = 0;                    // index of the first partial sum
    std::vector<double> partial_sums;  // nondecreasing under the sign preconditions
    bool monotone = true;

    double last() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
    bool practically_divergent(double threshold) const { return last() > threshold; }
};

/// Proposition-1 diagnostics (necessary conditions for all solutions of the
/// q == 0 equation to be bounded): partial sums of sum sum r/p and sum 1/p.
/// Requires p > 0 and r >= 0 real; their divergence certifies, by
/// contraposition, the existence of unbounded solutions.
template <class S>
std::pair<SeriesDiagnostic, SeriesDiagnostic> necessary_diagnostic(const CoefficientSet<S>& c) {
    using T = ScalarTraits<S>;
    const IndexWindow& w = c.window();
    for (int n = w.lo; n <= w.hi - 1; ++n)
        if (!T::is_real(c.p().at(n)) || T::real_part(c.p().at(n)) <= 0.0)
            throw std::invalid_argument("necessary_diagnostic: requires p(n) > 0 real");
    for (int n = w.lo + 1; n <= w.hi; ++n)
        if (!T::is_real(c.r().at(n)) || T::real_part(c.r().at(n)) < 0.0)
            throw std::invalid_argument("necessary_diagnostic: requires r(n) >= 0 real");

    SeriesDiagnostic dbl{SeriesKind::double_rp, w.lo + 1, {}, true};
    SeriesDiagnostic inv{SeriesKind::inv_p, w.lo + 1, {}, true};
    double acc_dbl = 0.0, acc_inv = 0.0, inner = 0.0;
    for (int s = w.lo + 1; s <= w.hi - 1; ++s) {
        inner += T::real_part(c.r().at(s));
        acc_dbl += inner / T::real_part(c.p().at(s));
        acc_inv += 1.0 / T::real_part(c.p().at(s));
        dbl.partial_sums.push_back(acc_dbl);
        inv.partial_sums.push_back(acc_inv);
    }
    return {dbl, inv};
}

/// Contraction certificate per the modulus criterion: a base point n_star and
/// delta < 1 bounding the restarted tails of Y^(1) and X^(2) (or their
/// quasi-derivative counterparts), yielding geometric decay of the higher
/// tables and a numeric bound on every solution over the inspected window.
/// Window-relative: it certifies nothing beyond the horizon.
struct BoundCertificate {
    bool valid = false;
    int n_star = 0;
    double delta = 0.0;          // best contraction constant found
    double solution_bound = 0.0;  // bound on |u1|, |u2| (or |phi1|, |phi2|) up to horizon
    int horizon = 0;
};

namespace detail {

template <class S>
void check_sl1_table(const SppsTable<S>& t) {
    using T = ScalarTraits<S>;
    const IndexWindow& w = t.coeffs.window();
    if (!T::is_zero(t.seed.lambda0))
        throw std::invalid_argument("bounded: table must be built at lambda0 = 0");
    for (int n = w.lo; n <= w.hi; ++n)
        if (!(T::is_real(t.seed.u0.at(n)) && T::real_part(t.seed.u0.at(n)) == 1.0))
            throw std::invalid_argument("bounded: table must use the seed u0 == 1");
    for (int n = w.lo + 1; n <= w.hi; ++n)
        if (!T::is_zero(t.coeffs.q().at(n)))
            throw std::invalid_argument("bounded: equation must have q == 0");
}

template <class S>
double abs_p(const CoefficientSet<S>& c, int n) {
    return ScalarTraits<S>::abs_value(c.p().at(n));
}
template <class S>
double abs_r(const CoefficientSet<S>& c, int n) {
    return ScalarTraits<S>::abs_value(c.r().at(n));
}

}  // namespace detail

/// Search for the smallest n_star whose restarted absolute tails of Y^(1) and
/// X^(2) stay below delta <= 0.9 up to the horizon. On success the solutions
/// u1, u2 at lambda = 1 are bounded by
///   max(prefix max, (|u(n_star)| + |phi(n_star)|) / (1 - delta)).
template <class S>
BoundCertificate sufficiency_certificate(const CoefficientSet<S>& c, const SppsTable<S>& t,
                                         int horizon) {
    detail::check_sl1_table(t);
    const IndexWindow& w = c.window();
    if (horizon > w.hi || horizon < w.lo + 2)
        throw std::out_of_range("sufficiency_certificate: horizon outside window");

    constexpr double kDeltaMargin = 0.9;
    BoundCertificate cert{false, 0, std::numeric_limits<double>::infinity(), 0.0, horizon};
    for (int ns = w.lo; ns <= horizon - 2; ++ns) {
        double y1 = 0.0, x2 = 0.0, inner_r = 0.0, local = 0.0;
        // Tail values at n = ns+1 .. horizon, built incrementally.
        for (int n = ns + 1; n <= horizon; ++n) {
            int s = n - 1;
            y1 += 1.0 / detail::abs_p(c, s);
            if (s >= ns + 1) {
                inner_r += detail::abs_r(c, s);
                x2 += inner_r / detail::abs_p(c, s);
            }
            local = std::max(local, std::max(y1, x2));
            if (local > kDeltaMargin) break;
        }
        if (local < cert.delta) {
            cert.delta = local;
            cert.n_star = ns;
        }
        if (local <= kDeltaMargin) {
            cert.valid = true;
            cert.delta = local;
            cert.n_star = ns;
            break;
        }
    }
    if (!cert.valid) return cert;

    const S one = ScalarTraits<S>::from_int(1);
    Sequence<S> u1 = eval_solution(assemble_u1(t), one);
    Sequence<S> u2 = eval_solution(assemble_u2(t), one);
    double prefix = 0.0;
    for (int n = w.lo; n <= std::min(cert.n_star + 1, w.hi); ++n)
        prefix = std::max(prefix, std::max(ScalarTraits<S>::abs_value(u1.at(n)),
                                           ScalarTraits<S>::abs_value(u2.at(n))));
    auto tail_bound = [&](const Sequence<S>& u) {
        double a = ScalarTraits<S>::abs_value(u.at(cert.n_star));
        double b = ScalarTraits<S>::abs_value(quasi_derivative(c, u, cert.n_star));
        return (a + b) / (1.0 - cert.delta);
    };
    cert.solution_bound = std::max(prefix, std::max(tail_bound(u1), tail_bound(u2)));
    return cert;
}

/// Same contraction search driven by the T~ tails, certifying boundedness of
/// the quasi-derivative phi = p Delta u for every solution on the window.
template <class S>
BoundCertificate phi_bounded_certificate(const CoefficientSet<S>& c, const SppsTable<S>& t,
                                         int horizon) {
    detail::check_sl1_table(t);
    const IndexWindow& w = c.window();
    if (horizon > w.hi || horizon < w.lo + 2)
        throw std::out_of_range("phi_bounded_certificate: horizon outside window");

    constexpr double kDeltaMargin = 0.9;
    BoundCertificate cert{false, 0, std::numeric_limits<double>::infinity(), 0.0, horizon};
    double m1_at_best = 0.0;
    for (int ns = w.lo; ns <= horizon - 2; ++ns) {
        double dtail = 0.0, inner_invp = 0.0, local = 0.0, m1 = 0.0, abs_x1 = 0.0;
        // T~ tail restarted at ns: sum_{s=ns}^{n-1} sum_{tau=ns}^{s} |r(s+1)|/|p(tau)|.
        for (int s = ns; s <= horizon - 1; ++s) {
            inner_invp += 1.0 / detail::abs_p(c, s);
            dtail += inner_invp * detail::abs_r(c, s + 1);
            abs_x1 += detail::abs_r(c, s + 1);
            m1 = std::max(m1, abs_x1);
            local = std::max(local, dtail);
            if (local > kDeltaMargin) break;
        }
        if (local < cert.delta) {
            cert.delta = local;
            cert.n_star = ns;
            m1_at_best = m1;
        }
        if (local <= kDeltaMargin) {
            cert.valid = true;
            cert.delta = local;
            cert.n_star = ns;
            m1_at_best = m1;
            break;
        }
    }
    if (!cert.valid) return cert;

    const S one = ScalarTraits<S>::from_int(1);
    Sequence<S> u1 = eval_solution(assemble_u1(t), one);
    Sequence<S> u2 = eval_solution(assemble_u2(t), one);
    double prefix = 0.0;
    for (int n = w.lo; n <= std::min(cert.n_star, w.hi - 1); ++n)
        prefix = std::max(prefix,
                          std::max(ScalarTraits<S>::abs_value(quasi_derivative(c, u1, n)),
                                   ScalarTraits<S>::abs_value(quasi_derivative(c, u2, n))));
    // On the tail, phi = A*phi1~ + B*phi2~ with |phi1~| <= M1/(1-delta) and
    // |phi2~| <= 1/(1-delta), where (A, B) are the values of u and phi at n_star.
    auto tail_bound = [&](const Sequence<S>& u) {
        double a = ScalarTraits<S>::abs_value(u.at(cert.n_star));
        double b = ScalarTraits<S>::abs_value(quasi_derivative(c, u, cert.n_star));
        return (a * m1_at_best + b) / (1.0 - cert.delta);
    };
    cert.solution_bound = std::max(prefix, std::max(tail_bound(u1), tail_bound(u2)));
    return cert;
}

}  // namespace bounded
}  // namespace spps

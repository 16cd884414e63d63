#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spps/seed.hpp"
#include "spps/spectral.hpp"

namespace spps {
namespace oracle {

/// Brute-force recurrence solution used as the independent cross-check for
/// every series-built solution.
template <class S>
Sequence<S> oracle_solution(const CoefficientSet<S>& c, const S& lam, const S& v_lo, const S& v_lo1) {
    return solve_recurrence(c, lam, v_lo, v_lo1);
}

struct ShootingProfile {
    std::vector<double> lam_grid;        // strictly increasing
    std::vector<double> boundary_value;  // boundary functional per sample
};

namespace detail {

/// Boundary functional F(lambda): propagate the solution pinned to the left
/// condition and evaluate the right condition on it. Real arithmetic only.
template <class S>
double boundary_functional(const CoefficientSet<S>& c, const BoundaryCondition<S>& bc, double lam) {
    using T = ScalarTraits<S>;
    // Left condition (alpha + as*lam) u(site) + (beta + bs*lam) u(site+1) = 0
    // is satisfied by u(site) = beta(lam), u(site+1) = -alpha(lam).
    if constexpr (!T::exact) {
        S slam(lam, 0.0);
        S a = bc.left.alpha + bc.left.alpha_slope * slam;
        S b = bc.left.beta + bc.left.beta_slope * slam;
        Sequence<S> u = solve_recurrence_from(c, slam, bc.left.site, b, -a);
        S f = (bc.right.alpha + bc.right.alpha_slope * slam) * u.at(bc.right.site) +
              (bc.right.beta + bc.right.beta_slope * slam) * u.at(bc.right.site + 1);
        return T::real_part(f);
    } else {
        throw std::invalid_argument("shooting oracle requires floating-point mode");
    }
}

}  // namespace detail

template <class S>
ShootingProfile shooting_profile(const CoefficientSet<S>& c, const BoundaryCondition<S>& bc,
                                 double lam_lo, double lam_hi, int grid) {
    if (grid < 2) throw std::invalid_argument("shooting_profile: grid must be >= 2");
    if (!(lam_lo < lam_hi)) throw std::invalid_argument("shooting_profile: need lam_lo < lam_hi");
    bc.validate(c.window());
    using T = ScalarTraits<S>;
    for (int n = c.window().lo; n <= c.window().hi - 1; ++n)
        if (!T::is_real(c.p().at(n)))
            throw std::invalid_argument("shooting requires real coefficients");
    for (int n = c.window().lo + 1; n <= c.window().hi; ++n)
        if (!T::is_real(c.q().at(n)) || !T::is_real(c.r().at(n)))
            throw std::invalid_argument("shooting requires real coefficients");
    ShootingProfile prof;
    for (int i = 0; i < grid; ++i) {
        double lam = lam_lo + (lam_hi - lam_lo) * i / (grid - 1);
        prof.lam_grid.push_back(lam);
        prof.boundary_value.push_back(detail::boundary_functional(c, bc, lam));
    }
    return prof;
}

/// Localize real eigenvalues by bisecting every sign change of the boundary
/// functional on the sample grid. May miss root pairs falling between grid
/// points; intended as a test oracle, not a production eigensolver.
template <class S>
std::vector<double> shooting_eigen_real(const CoefficientSet<S>& c, const BoundaryCondition<S>& bc,
                                        double lam_lo, double lam_hi, int grid) {
    ShootingProfile prof = shooting_profile(c, bc, lam_lo, lam_hi, grid);
    std::vector<double> eigs;
    for (size_t i = 0; i + 1 < prof.lam_grid.size(); ++i) {
        double fa = prof.boundary_value[i], fb = prof.boundary_value[i + 1];
        double a = prof.lam_grid[i], b = prof.lam_grid[i + 1];
        if (fa == 0.0) {
            eigs.push_back(a);
            continue;
        }
        if (fa * fb >= 0.0) continue;
        // Fixed bisection tolerance: this is a fixture, not a product surface.
        while (b - a > 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)))) {
            double m = 0.5 * (a + b);
            double fm = detail::boundary_functional(c, bc, m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if (fa * fm < 0.0) {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        eigs.push_back(0.5 * (a + b));
    }
    double last = prof.boundary_value.back();
    if (last == 0.0) eigs.push_back(prof.lam_grid.back());
    return eigs;
}

}  // namespace oracle
}  // namespace spps

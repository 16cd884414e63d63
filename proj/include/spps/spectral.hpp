#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spps/table.hpp"

namespace spps {

struct NoConvergence : std::runtime_error {
    NoConvergence(std::string msg, std::vector<int> unconverged, std::vector<Complex> partial)
        : std::runtime_error(std::move(msg)),
          unconverged(std::move(unconverged)),
          partial_roots(std::move(partial)) {}
    std::vector<int> unconverged;
    std::vector<Complex> partial_roots;
};

/// Two-point boundary condition. Each side imposes
///   (alpha + alpha_slope*lambda) u(site) + (beta + beta_slope*lambda) u(site+1) = 0.
/// The slope terms default to zero; they admit lambda-affine conditions such
/// as the left-end relation of the Laguerre configuration.
template <class S>
struct BoundaryCondition {
    struct Side {
        S alpha = ScalarTraits<S>::from_int(0);
        S beta = ScalarTraits<S>::from_int(0);
        S alpha_slope = ScalarTraits<S>::from_int(0);
        S beta_slope = ScalarTraits<S>::from_int(0);
        int site = 0;

        bool degenerate() const {
            using T = ScalarTraits<S>;
            return T::is_zero(alpha) && T::is_zero(beta) && T::is_zero(alpha_slope) &&
                   T::is_zero(beta_slope);
        }
        bool lambda_dependent() const {
            return !ScalarTraits<S>::is_zero(alpha_slope) || !ScalarTraits<S>::is_zero(beta_slope);
        }
    };
    Side left, right;

    void validate(const IndexWindow& w) const {
        if (left.degenerate() || right.degenerate())
            throw std::invalid_argument("BoundaryCondition: (alpha, beta) must not vanish");
        if (left.site < w.lo || left.site + 1 > w.hi || right.site < w.lo || right.site + 1 > w.hi)
            throw std::out_of_range("BoundaryCondition: site outside window");
        if (!(left.site < right.site))
            throw std::invalid_argument("BoundaryCondition: left site must precede right site");
    }
};

namespace poly {

template <class S>
std::vector<S> mul(const std::vector<S>& a, const std::vector<S>& b) {
    std::vector<S> out(a.size() + b.size() - 1, ScalarTraits<S>::from_int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

template <class S>
std::vector<S> add(std::vector<S> a, const std::vector<S>& b, const S& scale) {
    if (b.size() > a.size()) a.resize(b.size(), ScalarTraits<S>::from_int(0));
    for (size_t j = 0; j < b.size(); ++j) a[j] += scale * b[j];
    return a;
}

/// Drop high-order coefficients below trim_rel times the max magnitude
/// (exact zeros in rational mode).
template <class S>
void trim(std::vector<S>& c, double trim_rel = 1e-13) {
    double maxmag = 0.0;
    for (const S& v : c) maxmag = std::max(maxmag, ScalarTraits<S>::abs_value(v));
    auto negligible = [&](const S& v) {
        if constexpr (ScalarTraits<S>::exact)
            return ScalarTraits<S>::is_zero(v);
        else
            return ScalarTraits<S>::abs_value(v) <= trim_rel * maxmag;
    };
    while (c.size() > 1 && negligible(c.back())) c.pop_back();
}

}  // namespace poly

/// Characteristic polynomial in x = lambda - lambda0: determinant of the
/// 2x2 boundary-functional matrix of (u1, u2).
template <class S>
struct CharPoly {
    std::vector<S> coeffs;  // monomial basis in (lambda - lambda0)
    S lambda0;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

template <class S>
CharPoly<S> char_poly(const LambdaPolySolution<S>& u1, const LambdaPolySolution<S>& u2,
                      const BoundaryCondition<S>& bc, double trim_rel = 1e-13) {
    if (u1.n0 != u2.n0 || !(u1.lambda0 == u2.lambda0))
        throw std::invalid_argument("char_poly: u1 and u2 must come from the same table");
    bc.validate(u1.window);
    const S lambda0 = u1.lambda0;
    // lambda = lambda0 + x, so an affine coefficient a + s*lambda becomes the
    // degree-1 polynomial (a + s*lambda0) + s*x.
    auto affine = [&](const S& a, const S& s) {
        return std::vector<S>{a + s * lambda0, s};
    };
    auto functional = [&](const typename BoundaryCondition<S>::Side& side,
                          const LambdaPolySolution<S>& u) {
        std::vector<S> out = poly::mul(affine(side.alpha, side.alpha_slope), u.site(side.site));
        std::vector<S> bpart = poly::mul(affine(side.beta, side.beta_slope), u.site(side.site + 1));
        return poly::add(std::move(out), bpart, ScalarTraits<S>::from_int(1));
    };
    std::vector<S> det = poly::mul(functional(bc.left, u1), functional(bc.right, u2));
    det = poly::add(std::move(det), poly::mul(functional(bc.left, u2), functional(bc.right, u1)),
                    ScalarTraits<S>::from_int(-1));
    poly::trim(det, trim_rel);
    return CharPoly<S>{std::move(det), lambda0};
}

template <class S>
std::vector<Complex> to_complex_coeffs(const CharPoly<S>& p) {
    std::vector<Complex> out;
    out.reserve(p.coeffs.size());
    for (const S& c : p.coeffs) out.push_back(ScalarTraits<S>::to_complex(c));
    return out;
}

namespace detail {

inline std::pair<Complex, Complex> horner_with_derivative(const std::vector<Complex>& c, Complex z) {
    Complex v(0.0), d(0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        d = d * z + v;
        v = v * z + *it;
    }
    return {v, d};
}

}  // namespace detail

/// All complex roots by Aberth-Ehrlich simultaneous iteration from a circular
/// start scaled by the Cauchy root bound, with a final Newton polish.
inline std::vector<Complex> find_roots(std::vector<Complex> coeffs, double tol = 1e-12,
                                       int max_iter = 200) {
    poly::trim(coeffs);
    int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 1) throw std::invalid_argument("find_roots: degree must be >= 1");
    // Factor out exact zero roots (vanishing low-order coefficients).
    std::vector<Complex> roots;
    size_t shift = 0;
    double maxmag = 0.0;
    for (const Complex& c : coeffs) maxmag = std::max(maxmag, std::abs(c));
    while (shift + 1 < coeffs.size() && std::abs(coeffs[shift]) <= 1e-300 * maxmag) {
        roots.emplace_back(0.0, 0.0);
        ++shift;
    }
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(shift));
    deg = static_cast<int>(coeffs.size()) - 1;
    if (deg == 0) return roots;

    for (Complex& c : coeffs) c /= coeffs.back();
    double bound = 0.0;
    for (int i = 0; i < deg; ++i) bound = std::max(bound, std::abs(coeffs[static_cast<size_t>(i)]));
    double radius = 1.0 + bound;  // Cauchy bound for the monic polynomial

    std::vector<Complex> z(static_cast<size_t>(deg));
    for (int j = 0; j < deg; ++j) {
        double theta = 2.0 * std::numbers::pi * j / deg + 0.4;
        z[static_cast<size_t>(j)] = radius * Complex(std::cos(theta), std::sin(theta));
    }
    std::vector<bool> done(static_cast<size_t>(deg), false);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool all_done = true;
        for (int j = 0; j < deg; ++j) {
            auto& zj = z[static_cast<size_t>(j)];
            auto [pv, pd] = detail::horner_with_derivative(coeffs, zj);
            if (std::abs(pv) == 0.0) {
                done[static_cast<size_t>(j)] = true;
                continue;
            }
            Complex w = (std::abs(pd) > 0.0) ? pv / pd : Complex(1e-8, 1e-8);
            Complex sum(0.0);
            for (int i = 0; i < deg; ++i)
                if (i != j) sum += 1.0 / (zj - z[static_cast<size_t>(i)]);
            Complex denom = 1.0 - w * sum;
            Complex corr = (std::abs(denom) > 1e-300) ? w / denom : w;
            zj -= corr;
            bool conv = std::abs(corr) <= tol * std::max(1.0, std::abs(zj));
            done[static_cast<size_t>(j)] = conv;
            all_done = all_done && conv;
        }
        if (all_done) break;
    }
    std::vector<int> unconverged;
    for (int j = 0; j < deg; ++j)
        if (!done[static_cast<size_t>(j)]) unconverged.push_back(j);
    if (!unconverged.empty()) {
        std::vector<Complex> partial = roots;
        partial.insert(partial.end(), z.begin(), z.end());
        throw NoConvergence("find_roots: " + std::to_string(unconverged.size()) +
                                " root(s) failed to converge",
                            std::move(unconverged), std::move(partial));
    }
    // Newton polish.
    for (Complex& zj : z)
        for (int it = 0; it < 3; ++it) {
            auto [pv, pd] = detail::horner_with_derivative(coeffs, zj);
            if (std::abs(pd) == 0.0) break;
            zj -= pv / pd;
        }
    roots.insert(roots.end(), z.begin(), z.end());
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

/// Eigenfunction for a root lam: the null-vector combination of (u1, u2)
/// through the boundary matrix, normalized so the max-magnitude entry is 1.
template <class S>
Sequence<S> eigenfunction(const LambdaPolySolution<S>& u1, const LambdaPolySolution<S>& u2,
                          const BoundaryCondition<S>& bc, const S& lam, double tol = 1e-8) {
    bc.validate(u1.window);
    Sequence<S> e1 = eval_solution(u1, lam);
    Sequence<S> e2 = eval_solution(u2, lam);
    auto functional = [&](const typename BoundaryCondition<S>::Side& side, const Sequence<S>& u) {
        return (side.alpha + side.alpha_slope * lam) * u.at(side.site) +
               (side.beta + side.beta_slope * lam) * u.at(side.site + 1);
    };
    S bl1 = functional(bc.left, e1), bl2 = functional(bc.left, e2);
    S br1 = functional(bc.right, e1), br2 = functional(bc.right, e2);
    using T = ScalarTraits<S>;
    double left_mag = std::max(T::abs_value(bl1), T::abs_value(bl2));
    double right_mag = std::max(T::abs_value(br1), T::abs_value(br2));
    S c1, c2;
    double other_residual, other_scale;
    if (left_mag >= right_mag) {
        c1 = bl2;
        c2 = -bl1;
        other_residual = T::abs_value(c1 * br1 + c2 * br2);
        other_scale = std::max(left_mag, 1e-300) * std::max(right_mag, 1.0);
    } else {
        c1 = br2;
        c2 = -br1;
        other_residual = T::abs_value(c1 * bl1 + c2 * bl2);
        other_scale = std::max(right_mag, 1e-300) * std::max(left_mag, 1.0);
    }
    if (T::is_zero(c1) && T::is_zero(c2))
        throw std::runtime_error("eigenfunction: boundary matrix vanished identically");
    if (other_residual > tol * std::max(1.0, other_scale))
        throw std::runtime_error("eigenfunction: lambda is not an eigenvalue (boundary matrix "
                                 "nonsingular)");
    Sequence<S> f = Sequence<S>::generate(u1.window.lo, u1.window.hi,
                                          [&](int n) { return c1 * e1.at(n) + c2 * e2.at(n); });
    double maxmag = 0.0;
    int argmax = u1.window.lo;
    for (int n = u1.window.lo; n <= u1.window.hi; ++n)
        if (T::abs_value(f.at(n)) > maxmag) {
            maxmag = T::abs_value(f.at(n));
            argmax = n;
        }
    if (maxmag == 0.0) throw std::runtime_error("eigenfunction: trivial null vector");
    S norm = f.at(argmax);
    return Sequence<S>::generate(u1.window.lo, u1.window.hi, [&](int n) { return f.at(n) / norm; });
}

struct EigenResult {
    std::vector<Complex> eigenvalues;      // sorted by (re, im)
    std::vector<double> residuals;         // max relative Jacobi residual of eigenfunction
    std::vector<double> boundary_errors;   // boundary functional magnitudes
    std::vector<bool> multiplicity_flags;  // clustered closer than 1e-6 * scale
};

/// Full eigenvalue pipeline: characteristic polynomial, Aberth roots, and
/// eigenfunction residual check per root.
template <class S>
EigenResult solve_eigen(const CoefficientSet<S>& c, const SppsTable<S>& t,
                        const BoundaryCondition<S>& bc, double tol = 1e-12, int max_iter = 200) {
    LambdaPolySolution<S> u1 = assemble_u1(t);
    LambdaPolySolution<S> u2 = assemble_u2(t);
    CharPoly<S> cp = char_poly(u1, u2, bc);
    if (cp.degree() < 1) return {};
    std::vector<Complex> xs = find_roots(to_complex_coeffs(cp), tol, max_iter);
    Complex lam0 = ScalarTraits<S>::to_complex(t.seed.lambda0);

    // Residual checks run in complex floating point regardless of mode.
    EigenResult out;
    double scale = 0.0;
    for (const Complex& x : xs) scale = std::max(scale, std::abs(x));
    for (const Complex& x : xs) {
        Complex lam = lam0 + x;
        out.eigenvalues.push_back(lam);
        if constexpr (ScalarTraits<S>::exact) {
            out.residuals.push_back(0.0);  // roots certified downstream against exact poly
            out.boundary_errors.push_back(std::abs(detail::horner_with_derivative(
                                                       to_complex_coeffs(cp), x)
                                                       .first));
        } else {
            Sequence<S> f = eigenfunction(u1, u2, bc, S(lam), 1e-6);
            out.residuals.push_back(max_relative_residual(c, f, S(lam)));
            auto bval = [&](const typename BoundaryCondition<S>::Side& side) {
                return std::abs((side.alpha + side.alpha_slope * S(lam)) * f.at(side.site) +
                                (side.beta + side.beta_slope * S(lam)) * f.at(side.site + 1));
            };
            out.boundary_errors.push_back(std::max(bval(bc.left), bval(bc.right)));
        }
    }
    for (size_t i = 0; i < xs.size(); ++i) {
        bool flag = false;
        for (size_t j = 0; j < xs.size(); ++j)
            if (i != j && std::abs(xs[i] - xs[j]) < 1e-6 * std::max(1.0, scale)) flag = true;
        out.multiplicity_flags.push_back(flag);
    }
    return out;
}

}  // namespace spps

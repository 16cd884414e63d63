#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spps/seed.hpp"
#include "spps/seqgrid.hpp"

namespace spps {

/// n(n-1)...(n-k+1); empty product for k = 0.
template <class S>
S falling_factorial(long n, int k) {
    S acc = ScalarTraits<S>::from_int(1);
    for (int j = 0; j < k; ++j) acc *= ScalarTraits<S>::from_int(n - j);
    return acc;
}

/// Laguerre polynomial value sum_{k=0}^{n} C(n,k) (-lam)^k / k!.
template <class S>
S laguerre_closed_form(int n, const S& lam) {
    if (n < 0) throw std::invalid_argument("laguerre_closed_form: n must be >= 0");
    S acc = ScalarTraits<S>::from_int(0);
    S term = ScalarTraits<S>::from_int(1);  // C(n,k)(-lam)^k/k! at k
    for (int k = 0; k <= n; ++k) {
        acc += term;
        if (k < n)
            term = term * (-lam) * ScalarTraits<S>::from_int(n - k) /
                   (ScalarTraits<S>::from_int(k + 1) * ScalarTraits<S>::from_int(k + 1));
    }
    return acc;
}

/// The recursively built coefficient tables X^(i), Y^(i) on the full window,
/// all orders and both parities (the boundedness analysis consumes the
/// parities that do not appear in the solution formulas).
template <class S>
struct SppsTable {
    CoefficientSet<S> coeffs;
    SeedSolution<S> seed;
    int n0 = 0;
    int max_order = 0;
    std::vector<Sequence<S>> X;  // X[i], i = 0..max_order
    std::vector<Sequence<S>> Y;

    const Sequence<S>& x(int i) const { return X.at(static_cast<size_t>(i)); }
    const Sequence<S>& y(int i) const { return Y.at(static_cast<size_t>(i)); }
};

/// Smallest order making every site polynomial of u1, u2 complete.
inline int default_max_order(const IndexWindow& w, int n0) {
    return 2 * std::max(w.hi - n0, n0 - w.lo) + 1;
}

/// Build X^(i), Y^(i) up to max_order by the alternating star-sum recursion:
/// even X-steps integrate X^(i-1)(s) / (p(s) u0(s) u0(s+1)), odd X-steps
/// integrate u0^2(s+1) X^(i-1)(s+1) r(s+1); Y swaps the parity.
template <class S>
SppsTable<S> build_table(const CoefficientSet<S>& c, const SeedSolution<S>& s, int n0, int max_order,
                         double seed_tol = 1e-10) {
    const IndexWindow& w = c.window();
    if (n0 < w.lo || n0 > w.hi - 1)
        throw std::out_of_range("build_table: n0 = " + std::to_string(n0) + " outside [lo, hi-1]");
    if (max_order < 1) throw std::invalid_argument("build_table: max_order must be >= 1");
    if (s.residual_bound > seed_tol)
        throw std::invalid_argument("build_table: seed residual " + std::to_string(s.residual_bound) +
                                    " exceeds tolerance");
    const Sequence<S>& u0 = s.u0;

    // Star sum of a summand f(s), s in [lo, hi-1], as a sequence on [lo, hi].
    auto integrate = [&](auto&& f) {
        std::vector<S> vals(static_cast<size_t>(w.length()), ScalarTraits<S>::from_int(0));
        auto ref = [&](int n) -> S& { return vals[static_cast<size_t>(n - w.lo)]; };
        for (int n = n0; n <= w.hi - 1; ++n) ref(n + 1) = ref(n) + f(n);
        for (int n = n0; n >= w.lo + 1; --n) ref(n - 1) = ref(n) - f(n - 1);
        return Sequence<S>(w.lo, std::move(vals));
    };
    auto p_step = [&](const Sequence<S>& prev) {  // 1/(p u0 u0) summand
        return integrate([&](int sx) { return prev.at(sx) / (c.p().at(sx) * u0.at(sx) * u0.at(sx + 1)); });
    };
    auto r_step = [&](const Sequence<S>& prev) {  // u0^2 r summand
        return integrate(
            [&](int sx) { return u0.at(sx + 1) * u0.at(sx + 1) * prev.at(sx + 1) * c.r().at(sx + 1); });
    };

    SppsTable<S> t{c, s, n0, max_order, {}, {}};
    t.X.reserve(static_cast<size_t>(max_order) + 1);
    t.Y.reserve(static_cast<size_t>(max_order) + 1);
    t.X.push_back(Sequence<S>::constant(w.lo, w.hi, ScalarTraits<S>::from_int(1)));
    t.Y.push_back(Sequence<S>::constant(w.lo, w.hi, ScalarTraits<S>::from_int(1)));
    for (int i = 1; i <= max_order; ++i) {
        bool even = (i % 2 == 0);
        t.X.push_back(even ? p_step(t.X.back()) : r_step(t.X.back()));
        t.Y.push_back(even ? r_step(t.Y.back()) : p_step(t.Y.back()));
    }
    return t;
}

/// Per-site polynomial coefficients in (lambda - lambda0); the finite-sum
/// form of the solution representation.
template <class S>
struct LambdaPolySolution {
    enum class Tag { u1, u2 };
    IndexWindow window;
    int n0 = 0;
    S lambda0;
    Tag which = Tag::u1;
    std::vector<std::vector<S>> sites;  // sites[n - lo][k]

    const std::vector<S>& site(int n) const {
        if (n < window.lo || n > window.hi) throw std::out_of_range("LambdaPolySolution: site index");
        return sites[static_cast<size_t>(n - window.lo)];
    }
    int degree(int n) const { return static_cast<int>(site(n).size()) - 1; }
};

/// u1 sites: c_k(n) = u0(n) X^(2k)(n), k up to n-n0-1 (right branch) or
/// n0-n (left branch).
template <class S>
LambdaPolySolution<S> assemble_u1(const SppsTable<S>& t) {
    const IndexWindow& w = t.coeffs.window();
    LambdaPolySolution<S> sol{w, t.n0, t.seed.lambda0, LambdaPolySolution<S>::Tag::u1, {}};
    for (int n = w.lo; n <= w.hi; ++n) {
        int kmax = (n > t.n0) ? n - t.n0 - 1 : t.n0 - n;
        if (2 * kmax > t.max_order)
            throw std::invalid_argument("assemble_u1: table order " + std::to_string(t.max_order) +
                                        " insufficient for site n = " + std::to_string(n));
        std::vector<S> cs;
        cs.reserve(static_cast<size_t>(kmax) + 1);
        for (int k = 0; k <= kmax; ++k) cs.push_back(t.seed.u0.at(n) * t.x(2 * k).at(n));
        sol.sites.push_back(std::move(cs));
    }
    return sol;
}

/// u2 sites: c_k(n) = u0(n) Y^(2k+1)(n), k up to |n-n0|-1; u2(n0) = 0 exactly.
template <class S>
LambdaPolySolution<S> assemble_u2(const SppsTable<S>& t) {
    const IndexWindow& w = t.coeffs.window();
    LambdaPolySolution<S> sol{w, t.n0, t.seed.lambda0, LambdaPolySolution<S>::Tag::u2, {}};
    for (int n = w.lo; n <= w.hi; ++n) {
        int kmax = std::abs(n - t.n0) - 1;
        if (kmax >= 0 && 2 * kmax + 1 > t.max_order)
            throw std::invalid_argument("assemble_u2: table order " + std::to_string(t.max_order) +
                                        " insufficient for site n = " + std::to_string(n));
        std::vector<S> cs;
        for (int k = 0; k <= kmax; ++k) cs.push_back(t.seed.u0.at(n) * t.y(2 * k + 1).at(n));
        if (cs.empty()) cs.push_back(ScalarTraits<S>::from_int(0));  // n == n0
        sol.sites.push_back(std::move(cs));
    }
    return sol;
}

/// Horner evaluation of every site polynomial at x = lam - lambda0.
template <class S>
Sequence<S> eval_solution(const LambdaPolySolution<S>& sol, const S& lam) {
    S x = lam - sol.lambda0;
    return Sequence<S>::generate(sol.window.lo, sol.window.hi, [&](int n) {
        const std::vector<S>& cs = sol.site(n);
        S acc = ScalarTraits<S>::from_int(0);
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * x + *it;
        return acc;
    });
}

/// Combination c1 u1 + c2 u2 matching prescribed values (a, b) at
/// (n_init, n_init+1), evaluated at lam. The 2x2 system is solvable because
/// p(n) W(u1,u2)(n) == 1.
template <class S>
Sequence<S> solution_with_initial(const LambdaPolySolution<S>& u1, const LambdaPolySolution<S>& u2,
                                  const S& lam, int n_init, const S& a, const S& b) {
    Sequence<S> e1 = eval_solution(u1, lam);
    Sequence<S> e2 = eval_solution(u2, lam);
    S det = casoratian(e1, e2, n_init);
    if (ScalarTraits<S>::is_zero(det))
        throw std::runtime_error("solution_with_initial: degenerate basis at n_init");
    S c1 = (a * e2.at(n_init + 1) - b * e2.at(n_init)) / det;
    S c2 = (b * e1.at(n_init) - a * e1.at(n_init + 1)) / det;
    return Sequence<S>::generate(u1.window.lo, u1.window.hi,
                                 [&](int n) { return c1 * e1.at(n) + c2 * e2.at(n); });
}

}  // namespace spps

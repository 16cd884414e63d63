#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spps/scalar.hpp"

namespace spps {

/// Finite index window [lo, hi]; a truncation of the usual half line.
/// lo is the first index where the unknown sequence is defined; the
/// difference equation itself lives on the interior [lo+1, hi-1].
struct IndexWindow {
    int lo = 0;
    int hi = 0;

    IndexWindow() = default;
    IndexWindow(int lo_, int hi_) : lo(lo_), hi(hi_) {
        if (lo > hi - 2) throw std::invalid_argument("IndexWindow: need hi >= lo+2");
    }

    int length() const { return hi - lo + 1; }
    bool contains(int n) const { return n >= lo && n <= hi; }
    bool interior(int n) const { return n >= lo + 1 && n <= hi - 1; }
};

/// A sequence of scalars on a declared index sub-range. Access outside the
/// range is a hard error, never a silent zero: the backward branch of the
/// star sum would be corrupted by zero extension.
template <class S>
class Sequence {
public:
    Sequence() = default;
    Sequence(int lo, std::vector<S> values) : lo_(lo), values_(std::move(values)) {}

    /// Constant sequence on [lo, hi].
    static Sequence constant(int lo, int hi, const S& v) {
        return Sequence(lo, std::vector<S>(static_cast<size_t>(hi - lo + 1), v));
    }

    /// Build from a pointwise generator f(n).
    template <class F>
    static Sequence generate(int lo, int hi, F&& f) {
        std::vector<S> vals;
        vals.reserve(static_cast<size_t>(hi - lo + 1));
        for (int n = lo; n <= hi; ++n) vals.push_back(f(n));
        return Sequence(lo, std::move(vals));
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(values_.size()) - 1; }
    int size() const { return static_cast<int>(values_.size()); }
    bool in_range(int n) const { return n >= lo() && n <= hi(); }

    const S& at(int n) const {
        if (!in_range(n))
            throw std::out_of_range("Sequence: index " + std::to_string(n) + " outside [" +
                                    std::to_string(lo()) + "," + std::to_string(hi()) + "]");
        return values_[static_cast<size_t>(n - lo_)];
    }

    const std::vector<S>& values() const { return values_; }

private:
    int lo_ = 0;
    std::vector<S> values_;
};

/// One Jacobi operator instance: p on [lo, hi-1], q and r on [lo+1, hi].
/// p is checked nonzero everywhere at construction.
template <class S>
class CoefficientSet {
public:
    CoefficientSet(IndexWindow w, Sequence<S> p, Sequence<S> q, Sequence<S> r)
        : window_(w), p_(std::move(p)), q_(std::move(q)), r_(std::move(r)) {
        check_range("p", p_, w.lo, w.hi - 1);
        check_range("q", q_, w.lo + 1, w.hi);
        check_range("r", r_, w.lo + 1, w.hi);
        for (int n = w.lo; n <= w.hi - 1; ++n)
            if (ScalarTraits<S>::is_zero(p_.at(n)))
                throw std::invalid_argument("CoefficientSet: p(" + std::to_string(n) + ") = 0");
    }

    const IndexWindow& window() const { return window_; }
    const Sequence<S>& p() const { return p_; }
    const Sequence<S>& q() const { return q_; }
    const Sequence<S>& r() const { return r_; }

private:
    static void check_range(const char* name, const Sequence<S>& s, int lo, int hi) {
        if (s.lo() != lo || s.hi() != hi)
            throw std::invalid_argument(std::string("CoefficientSet: ") + name + " must cover [" +
                                        std::to_string(lo) + "," + std::to_string(hi) + "], got [" +
                                        std::to_string(s.lo()) + "," + std::to_string(s.hi()) + "]");
    }

    IndexWindow window_;
    Sequence<S> p_, q_, r_;
};

/// Forward difference Delta u(n) = u(n+1) - u(n).
template <class S>
S delta(const Sequence<S>& u, int n) {
    return u.at(n + 1) - u.at(n);
}

/// Indefinite sum normalized to vanish at n0 (the star convention):
/// forward sum for n > n0, zero at n = n0, negated backward sum for n < n0.
template <class S>
S star_sum(const Sequence<S>& u, int n0, int n) {
    S acc = ScalarTraits<S>::from_int(0);
    if (n > n0) {
        for (int j = n0; j <= n - 1; ++j) acc += u.at(j);
    } else if (n < n0) {
        for (int j = n; j <= n0 - 1; ++j) acc -= u.at(j);
    }
    return acc;
}

/// Residual of the difference equation at an interior point:
/// Delta(p(n-1) Delta u(n-1)) + q(n) u(n) - lambda r(n) u(n).
/// Zero exactly when u solves the equation at n.
template <class S>
S apply_jacobi(const CoefficientSet<S>& c, const Sequence<S>& u, const S& lam, int n) {
    if (!c.window().interior(n))
        throw std::out_of_range("apply_jacobi: n = " + std::to_string(n) + " not interior");
    return c.p().at(n) * (u.at(n + 1) - u.at(n)) - c.p().at(n - 1) * (u.at(n) - u.at(n - 1)) +
           (c.q().at(n) - lam * c.r().at(n)) * u.at(n);
}

/// Magnitude scale of the terms entering apply_jacobi at n, for relative
/// residual reporting (residual / max(1, scale)).
template <class S>
double jacobi_scale(const CoefficientSet<S>& c, const Sequence<S>& u, const S& lam, int n) {
    using T = ScalarTraits<S>;
    double s = T::abs_value(c.p().at(n)) * (T::abs_value(u.at(n + 1)) + T::abs_value(u.at(n)));
    s += T::abs_value(c.p().at(n - 1)) * (T::abs_value(u.at(n)) + T::abs_value(u.at(n - 1)));
    s += (T::abs_value(c.q().at(n)) + T::abs_value(lam) * T::abs_value(c.r().at(n))) * T::abs_value(u.at(n));
    return s;
}

/// Relative residual of u as a solution at interior point n.
template <class S>
double relative_residual(const CoefficientSet<S>& c, const Sequence<S>& u, const S& lam, int n) {
    double res = ScalarTraits<S>::abs_value(apply_jacobi(c, u, lam, n));
    double scale = jacobi_scale(c, u, lam, n);
    return res / std::max(1.0, scale);
}

/// Max relative residual over the interior.
template <class S>
double max_relative_residual(const CoefficientSet<S>& c, const Sequence<S>& u, const S& lam) {
    double m = 0.0;
    for (int n = c.window().lo + 1; n <= c.window().hi - 1; ++n)
        m = std::max(m, relative_residual(c, u, lam, n));
    return m;
}

}  // namespace spps

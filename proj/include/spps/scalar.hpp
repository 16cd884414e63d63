#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace spps {

/// Exact complex number with rational real and imaginary parts.
/// Used as the "rational" arithmetic mode for regression against the
/// closed-form identities, where zero must mean exactly zero.
class GaussianRational {
public:
    GaussianRational() : re_(0), im_(0) {}
    GaussianRational(long v) : re_(v), im_(0) {}          // NOLINT(google-explicit-constructor)
    GaussianRational(const mpq_class& re) : re_(re), im_(0) {}  // NOLINT
    GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

    const mpq_class& real() const { return re_; }
    const mpq_class& imag() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    GaussianRational conj() const { return {re_, mpq_class(-im_)}; }

    /// |z|^2, exact.
    mpq_class norm2() const { return re_ * re_ + im_ * im_; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a) {
        return {mpq_class(-a.re_), mpq_class(-a.im_)};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        mpq_class d = b.norm2();
        if (d == 0) throw std::domain_error("GaussianRational: division by zero");
        return {(a.re_ * b.re_ + a.im_ * b.im_) / d, (a.im_ * b.re_ - a.re_ * b.im_) / d};
    }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
    GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

private:
    mpq_class re_, im_;
};

/// Parse "p/q" or "p" into an exact rational. Throws on malformed input.
inline mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// Scalar traits: the small set of queries the numerics need on either mode.
// ---------------------------------------------------------------------------

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<std::complex<double>> {
    using scalar = std::complex<double>;
    static constexpr bool exact = false;
    static scalar from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static bool is_zero(const scalar& z) { return z == scalar(0.0, 0.0); }
    static bool is_real(const scalar& z) { return z.imag() == 0.0; }
    static double abs_value(const scalar& z) { return std::abs(z); }
    static double real_part(const scalar& z) { return z.real(); }
    static scalar conj(const scalar& z) { return std::conj(z); }
    static std::complex<double> to_complex(const scalar& z) { return z; }
};

template <>
struct ScalarTraits<GaussianRational> {
    using scalar = GaussianRational;
    static constexpr bool exact = true;
    static scalar from_int(long v) { return GaussianRational(v); }
    static bool is_zero(const scalar& z) { return z.is_zero(); }
    static bool is_real(const scalar& z) { return z.is_real(); }
    static double abs_value(const scalar& z) { return std::sqrt(z.norm2().get_d()); }
    static double real_part(const scalar& z) { return z.real().get_d(); }
    static scalar conj(const scalar& z) { return z.conj(); }
    static std::complex<double> to_complex(const scalar& z) { return z.to_complex(); }
};

using Complex = std::complex<double>;

}  // namespace spps

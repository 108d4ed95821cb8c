#pragma once

// Spherical-harmonic reduction of the angular operators appearing in the
// first-order Maxwell transport system.  With the spin-weighted basis
// functions chosen below, each (l,m) harmonic evolves by
//
//     L a = c_down b          N b = -c_up W a
//     N a = -c_down c         L c = +c_up W a
//
// where L = d_t + d_rs, N = d_t - d_rs, W = (1-2M/r)/r^2, and
// c_up = c_down = sqrt(l(l+1)).  Applying N to the first relation gives the
// scalar wave equation for the zero-weight amplitude,
// d_t^2 a = d_rs^2 a - l(l+1) W a.  The basis signs are pinned by the
// angular oracle below, which differentiates explicit low-l harmonics.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "bhmax/errors.hpp"

namespace bhmax {

struct HarmonicIndex {
    int l = 0;
    int m = 0;
    double lambda = 0.0; // sqrt(l(l+1))

    double eigenvalue() const { return static_cast<double>(l) * (l + 1.0); }
};

inline HarmonicIndex make_harmonic(int l, int m) {
    if (l < 0) throw config_error("HarmonicIndex: l must be nonnegative");
    if (std::abs(m) > l) throw config_error("HarmonicIndex: require |m| <= l");
    HarmonicIndex h;
    h.l = l;
    h.m = m;
    h.lambda = std::sqrt(static_cast<double>(l) * (l + 1.0));
    return h;
}

struct LadderCoefficients {
    double c_up = 0.0;
    double c_down = 0.0;
};

// Symmetric split: both coefficients equal sqrt(l(l+1)); the signs of their
// appearances are fixed in the transport table above.  m never enters
// (spherical symmetry).
inline LadderCoefficients ladder_coefficients(int l) {
    if (l < 0) throw config_error("ladder_coefficients: l must be nonnegative");
    const double lam = std::sqrt(static_cast<double>(l) * (l + 1.0));
    return {lam, lam};
}

namespace detail {

inline double fac(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

// Wigner-d based spin-weighted spherical harmonic (Goldberg et al. form).
inline std::complex<double> swsh_raw(int s, int l, int m, double theta, double phi) {
    if (l < std::abs(s) || l < std::abs(m)) return {0.0, 0.0};
    const double ch = std::cos(0.5 * theta);
    const double sh = std::sin(0.5 * theta);
    const int k1 = std::max(0, m - s);
    const int k2 = std::min(l + m, l - s);
    double sum = 0.0;
    for (int k = k1; k <= k2; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        sum += sgn * std::pow(ch, 2 * l + m - s - 2 * k) * std::pow(sh, 2 * k + s - m) /
               (fac(l + m - k) * fac(l - s - k) * fac(k) * fac(k + s - m));
    }
    const double norm = ((s % 2) ? -1.0 : 1.0) *
                        std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI)) *
                        std::sqrt(fac(l + m) * fac(l - m) * fac(l + s) * fac(l - s));
    return norm * sum * std::exp(std::complex<double>(0.0, m * phi));
}

} // namespace detail

// Basis functions carried by the harmonic amplitudes (a, b, c).  The spin
// weight +-1 members are defined as -(1/lambda) M Y_lm and
// -(1/lambda) Mbar Y_lm, written in closed form through
//   d_theta Y_lm = m cot(theta) Y_lm + sqrt((l-m)(l+m+1)) e^{-i phi} Y_{l,m+1},
// which makes the transport table hold exactly and keeps the family
// orthonormal (|M Y|^2 integrates to l(l+1)).  Not evaluable at the poles.
inline std::complex<double> zero_weight_basis(int l, int m, double theta, double phi) {
    return detail::swsh_raw(0, l, m, theta, phi);
}

namespace detail {

inline std::complex<double> ladder_combination(int l, int m, double theta, double phi,
                                               double angular_weight) {
    if (l == 0) return {0.0, 0.0};
    const double lam = std::sqrt(static_cast<double>(l) * (l + 1.0));
    const std::complex<double> y = swsh_raw(0, l, m, theta, phi);
    std::complex<double> raised{0.0, 0.0};
    if (m < l) {
        const double c = std::sqrt(static_cast<double>(l - m) * (l + m + 1.0));
        raised = c * std::exp(std::complex<double>(0.0, -phi)) *
                 swsh_raw(0, l, m + 1, theta, phi);
    }
    return -(static_cast<double>(m) * angular_weight * y + raised) / lam;
}

} // namespace detail

inline std::complex<double> spin_plus_basis(int l, int m, double theta, double phi) {
    const double w = std::cos(theta) / std::sin(theta) - 1.0 / std::sin(theta);
    return detail::ladder_combination(l, m, theta, phi, w);
}
inline std::complex<double> spin_minus_basis(int l, int m, double theta, double phi) {
    const double w = std::cos(theta) / std::sin(theta) + 1.0 / std::sin(theta);
    return detail::ladder_combination(l, m, theta, phi, w);
}

namespace detail {

// 6th-order central differences of a smooth angular function; accurate to
// ~1e-12 for the low-l harmonics the oracle touches.
template <typename F>
std::complex<double> d_theta(const F& f, double th, double ph) {
    const double h = 2e-3;
    return (f(th + 3 * h, ph) * 1.0 - f(th + 2 * h, ph) * 9.0 + f(th + h, ph) * 45.0 -
            f(th - h, ph) * 45.0 + f(th - 2 * h, ph) * 9.0 - f(th - 3 * h, ph) * 1.0) /
           (60.0 * h);
}

template <typename F>
std::complex<double> d_phi(const F& f, double th, double ph) {
    const double h = 2e-3;
    return (f(th, ph + 3 * h) * 1.0 - f(th, ph + 2 * h) * 9.0 + f(th, ph + h) * 45.0 -
            f(th, ph - h) * 45.0 + f(th, ph - 2 * h) * 9.0 - f(th, ph - 3 * h) * 1.0) /
           (60.0 * h);
}

} // namespace detail

// Max deviation, over an angular sample grid, of the four reduced relations
// from the actions of M = d_theta + (i/sin) d_phi and its conjugate:
//
//   (Mbar + cot) Y+ = +lambda Y0        M Y0 = -lambda Y+
//   (M + cot)    Y- = +lambda Y0        Mbar Y0 = -lambda Y-
//
// Explicit harmonics are hardcoded through the closed Wigner form; l <= 3.
inline double angular_oracle_residual(int l, int m, int n_theta = 64, int n_phi = 64) {
    if (l < 0 || l > 3) throw config_error("angular_oracle_residual: require 0 <= l <= 3");
    if (std::abs(m) > l) throw config_error("angular_oracle_residual: require |m| <= l");
    const double lam = ladder_coefficients(l).c_up;

    auto y0 = [&](double th, double ph) { return zero_weight_basis(l, m, th, ph); };
    auto yp = [&](double th, double ph) { return spin_plus_basis(l, m, th, ph); };
    auto ym = [&](double th, double ph) { return spin_minus_basis(l, m, th, ph); };

    using C = std::complex<double>;
    const C I(0.0, 1.0);
    double worst = 0.0;
    for (int it = 0; it < n_theta; ++it) {
        const double th = 0.4 + (M_PI - 0.8) * (it + 0.5) / n_theta;
        const double cot = std::cos(th) / std::sin(th);
        const double csc = 1.0 / std::sin(th);
        for (int ip = 0; ip < n_phi; ++ip) {
            const double ph = 2.0 * M_PI * (ip + 0.5) / n_phi;

            const C M_y0 = detail::d_theta(y0, th, ph) + I * csc * detail::d_phi(y0, th, ph);
            const C Mb_y0 = detail::d_theta(y0, th, ph) - I * csc * detail::d_phi(y0, th, ph);
            const C Mbc_yp = detail::d_theta(yp, th, ph) - I * csc * detail::d_phi(yp, th, ph) +
                             cot * yp(th, ph);
            const C Mc_ym = detail::d_theta(ym, th, ph) + I * csc * detail::d_phi(ym, th, ph) +
                            cot * ym(th, ph);

            worst = std::max(worst, std::abs(Mbc_yp - lam * y0(th, ph)));
            worst = std::max(worst, std::abs(Mc_ym - lam * y0(th, ph)));
            worst = std::max(worst, std::abs(M_y0 + lam * yp(th, ph)));
            worst = std::max(worst, std::abs(Mb_y0 + lam * ym(th, ph)));
        }
    }
    return worst;
}

struct ConsistencyReport {
    bool consistent = false;
    double product = 0.0;   // c_up * c_down
    double expected = 0.0;  // l(l+1)
};

// Composing the transport relations: N L a = c_down N b = -c_up c_down W a,
// which is the spin-reduced wave equation iff c_up c_down = l(l+1).
inline ConsistencyReport consistency_check(int l) {
    const LadderCoefficients c = ladder_coefficients(l);
    ConsistencyReport rep;
    rep.product = c.c_up * c.c_down;
    rep.expected = static_cast<double>(l) * (l + 1.0);
    const double scale = std::max(1.0, rep.expected);
    rep.consistent = std::abs(rep.product - rep.expected) <= 4.0 * 1e-16 * scale;
    return rep;
}

} // namespace bhmax

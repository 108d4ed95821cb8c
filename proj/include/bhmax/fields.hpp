#pragma once

// Component dictionaries for the Maxwell field: stationary-tetrad spinor
// components, electric/magnetic components, coordinate-basis components,
// and the static (non-radiatable) l=0 solutions.

#include <cmath>
#include <complex>
#include <vector>

#include "bhmax/background.hpp"
#include "bhmax/errors.hpp"
#include "bhmax/spectral.hpp"

namespace bhmax {

using complexd = std::complex<double>;

// phi_1, phi_0, phi_-1: spin weight +1, 0, -1.  The null-decomposition
// scalars live inside phi_0 = rho + i sigma; alpha and alpha-bar are the
// tangential content of phi_{+-1}.
struct SpinorTriple {
    complexd phi_p = 0.0;  // phi_1
    complexd phi_0 = 0.0;
    complexd phi_m = 0.0;  // phi_-1

    double energy_density() const {
        return std::norm(phi_p) + 2.0 * std::norm(phi_0) + std::norm(phi_m);
    }
};

struct EBComponents {
    double E_r = 0.0, E_theta = 0.0, E_phi = 0.0;
    double B_r = 0.0, B_theta = 0.0, B_phi = 0.0;

    double e_squared() const { return E_r * E_r + E_theta * E_theta + E_phi * E_phi; }
    double b_squared() const { return B_r * B_r + B_theta * B_theta + B_phi * B_phi; }
};

// Capital components: Phi_1 = r f^{1/2} phi_1, Phi_0 = r^2 phi_0,
// Phi_-1 = r f^{1/2} phi_-1.
struct CoordinateTriple {
    complexd Phi_p = 0.0;
    complexd Phi_0 = 0.0;
    complexd Phi_m = 0.0;
};

struct StaticCharge {
    double q_electric = 0.0;
    double q_magnetic = 0.0;
};

inline SpinorTriple phi_from_EB(const EBComponents& eb) {
    SpinorTriple s;
    s.phi_p = complexd(eb.E_theta + eb.B_phi, eb.E_phi - eb.B_theta);
    s.phi_0 = complexd(eb.E_r, eb.B_r);
    s.phi_m = complexd(eb.E_theta - eb.B_phi, -(eb.E_phi + eb.B_theta));
    return s;
}

inline EBComponents EB_from_phi(const SpinorTriple& s) {
    EBComponents eb;
    eb.E_r = s.phi_0.real();
    eb.B_r = s.phi_0.imag();
    eb.E_theta = 0.5 * (s.phi_p.real() + s.phi_m.real());
    eb.B_phi = 0.5 * (s.phi_p.real() - s.phi_m.real());
    eb.E_phi = 0.5 * (s.phi_p.imag() - s.phi_m.imag());
    eb.B_theta = -0.5 * (s.phi_p.imag() + s.phi_m.imag());
    return eb;
}

inline CoordinateTriple capital_from_small(const SpinorTriple& s, double r,
                                           const BackgroundParams& p) {
    if (!(r > 2.0 * p.mass)) throw std::domain_error("capital_from_small: r must exceed 2M");
    const double f = 1.0 - 2.0 * p.mass / r;
    const double rf = r * std::sqrt(f);
    return {rf * s.phi_p, r * r * s.phi_0, rf * s.phi_m};
}

inline SpinorTriple small_from_capital(const CoordinateTriple& c, double r,
                                       const BackgroundParams& p) {
    if (!(r > 2.0 * p.mass)) throw std::domain_error("small_from_capital: r must exceed 2M");
    const double f = 1.0 - 2.0 * p.mass / r;
    const double rf = r * std::sqrt(f);
    return {c.Phi_p / rf, c.Phi_0 / (r * r), c.Phi_m / rf};
}

struct NullStress {
    double T_ll = 0.0; // T(l^,l^)
    double T_ln = 0.0; // T(l^,n^)
    double T_nn = 0.0; // T(n^,n^)
};

inline NullStress null_stress_components(const SpinorTriple& s) {
    return {std::norm(s.phi_p), std::norm(s.phi_0), std::norm(s.phi_m)};
}

// Appendix-A charge solutions: phi_0 = (q_E + i q_B)/r^2, phi_{+-1} = 0.
// Time independent, nonvanishing on the horizon.
inline SpinorTriple static_solution(const StaticCharge& q, double rs,
                                    const BackgroundParams& p) {
    const RadialPoint pt = radial_point_from_tortoise(rs, p);
    SpinorTriple s;
    s.phi_0 = complexd(q.q_electric, q.q_magnetic) / (pt.r * pt.r);
    return s;
}

// One harmonic's coordinate-basis amplitudes at a single radial point.
struct ModeAmplitude {
    HarmonicIndex mode;
    complexd b = 0.0; // spin +1
    complexd a = 0.0; // spin 0
    complexd c = 0.0; // spin -1
};

// Assembles the pointwise spinor triple from modal amplitudes:
//   Phi_0 = sum a Y0_lm,  Phi_1 = sum b Y+_lm,  Phi_-1 = sum c Y-_lm,
// then strips the coordinate weights.
inline SpinorTriple reconstruct_point(const std::vector<ModeAmplitude>& modes, double theta,
                                      double phi_angle, double r, const BackgroundParams& p) {
    CoordinateTriple cap;
    for (const ModeAmplitude& ma : modes) {
        cap.Phi_0 += ma.a * zero_weight_basis(ma.mode.l, ma.mode.m, theta, phi_angle);
        cap.Phi_p += ma.b * spin_plus_basis(ma.mode.l, ma.mode.m, theta, phi_angle);
        cap.Phi_m += ma.c * spin_minus_basis(ma.mode.l, ma.mode.m, theta, phi_angle);
    }
    return small_from_capital(cap, r, p);
}

} // namespace bhmax

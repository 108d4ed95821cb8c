#pragma once

// Energy functionals and the integrands of the identities they satisfy:
// conserved T-energy, conformal K-energy, the trapping (almost-conservation)
// integrand in both Maxwell and scalar-wave form, the radial-multiplier
// bulk groups, Hardy estimates, and the local decay integral.
//
// All Maxwell energies use the measure (1 - 2M/r) r^2 drs d^2w.  Per
// harmonic the angular integral is carried out by Parseval, leaving
//   E^T = 1/4 int (|b|^2 + |c|^2 + 2 W |a|^2) drs
//   E^K = 1/4 int (u+^2 |b|^2 + u-^2 |c|^2 + (u+^2 + u-^2) W |a|^2) drs
// with W = (1-2M/r)/r^2 and (b, a, c) the coordinate-basis amplitudes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bhmax/background.hpp"
#include "bhmax/errors.hpp"
#include "bhmax/solver.hpp"

namespace bhmax {

namespace detail {

// trapezoid weight
inline double tw(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

// 2nd-order gradient, one-sided at the edges.
inline void diff2(const std::vector<complexd>& u, double h, std::vector<complexd>& du) {
    const std::size_t n = u.size();
    du.resize(n);
    const double s = 1.0 / (2.0 * h);
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * s;
    for (std::size_t i = 1; i + 1 < n; ++i) du[i] = (u[i + 1] - u[i - 1]) * s;
    du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * s;
}

} // namespace detail

// E = 1/2 int (|adot|^2 + |d_rs a|^2 + V_l |a|^2) drs, trapezoid weights.
inline double wave_energy(const HarmonicWaveState& s, const RadialGrid& g) {
    const std::vector<double>& v = g.potential(s.mode.l);
    std::vector<complexd> da;
    detail::diff2(s.a, g.h, da);
    double e = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        e += detail::tw(i, g.n) *
             (std::norm(s.adot[i]) + std::norm(da[i]) + v[i] * std::norm(s.a[i]));
    return 0.5 * e * g.h;
}

// Same functional with the gradient supplied by the caller; used by the
// transport-implied cross-checks and the refined-quadrature oracles.
inline double wave_energy_with_gradient(const std::vector<complexd>& a,
                                        const std::vector<complexd>& adot,
                                        const std::vector<complexd>& grad,
                                        const std::vector<double>& v, double h) {
    const std::size_t n = a.size();
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        e += detail::tw(i, n) * (std::norm(adot[i]) + std::norm(grad[i]) + v[i] * std::norm(a[i]));
    return 0.5 * e * h;
}

struct EnergyValue {
    double value = 0.0;
    bool boundary_growth = false; // integrand not negligible at rs_max
};

// Conformal charge of the scalar amplitude,
// e_C = 1/4 |u+ L a|^2 + 1/4 |u- N a|^2 + 1/2 (t^2+rs^2) V_l |a|^2 + e,
// generated by K + T.
inline EnergyValue wave_conformal_energy(const HarmonicWaveState& s, const RadialGrid& g,
                                         double t) {
    const std::vector<double>& v = g.potential(s.mode.l);
    std::vector<complexd> da;
    detail::diff2(s.a, g.h, da);
    double total = 0.0, last = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double up = t + g.rs[i];
        const double um = t - g.rs[i];
        const complexd La = s.adot[i] + da[i];
        const complexd Na = s.adot[i] - da[i];
        const double e = std::norm(s.adot[i]) + std::norm(da[i]) + v[i] * std::norm(s.a[i]);
        const double ec = 0.25 * up * up * std::norm(La) + 0.25 * um * um * std::norm(Na) +
                          0.5 * (t * t + g.rs[i] * g.rs[i]) * v[i] * std::norm(s.a[i]) + e;
        total += detail::tw(i, g.n) * ec;
        if (i + 1 == g.n) last = ec;
    }
    EnergyValue out;
    out.value = 0.5 * total * g.h;
    out.boundary_growth = last * g.h > 1e-10 * std::max(out.value, 1e-300);
    return out;
}

inline double maxwell_T_energy_mode(const PriceState& s, const RadialGrid& g) {
    double e = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        e += detail::tw(i, g.n) *
             (std::norm(s.b[i]) + std::norm(s.c[i]) + 2.0 * g.w[i] * std::norm(s.a[i]));
    return 0.25 * e * g.h;
}

inline double maxwell_T_energy(const std::vector<PriceState>& states, const RadialGrid& g) {
    double e = 0.0;
    for (const PriceState& s : states) e += maxwell_T_energy_mode(s, g);
    return e;
}

inline EnergyValue maxwell_K_energy_mode(const PriceState& s, const RadialGrid& g, double t) {
    double total = 0.0, last = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double up = t + g.rs[i];
        const double um = t - g.rs[i];
        const double ek = up * up * std::norm(s.b[i]) + um * um * std::norm(s.c[i]) +
                          (up * up + um * um) * g.w[i] * std::norm(s.a[i]);
        total += detail::tw(i, g.n) * ek;
        if (i + 1 == g.n) last = ek;
    }
    EnergyValue out;
    out.value = 0.25 * total * g.h;
    out.boundary_growth = 0.25 * last * g.h > 1e-10 * std::max(out.value, 1e-300);
    return out;
}

inline EnergyValue maxwell_K_energy(const std::vector<PriceState>& states, const RadialGrid& g,
                                    double t) {
    EnergyValue out;
    for (const PriceState& s : states) {
        const EnergyValue e = maxwell_K_energy_mode(s, g, t);
        out.value += e.value;
        out.boundary_growth = out.boundary_growth || e.boundary_growth;
    }
    return out;
}

// E-functional of the zero-weight amplitude with the gradient and time
// derivative implied by the transport relations; equals l(l+1) E^T of the
// triple identically (Lemma-style energy correspondence).
inline double wave_energy_from_price(const PriceState& s, const RadialGrid& g) {
    const double cd = ladder_coefficients(s.mode.l).c_down;
    const std::vector<double>& v = g.potential(s.mode.l);
    double e = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const complexd adot = 0.5 * cd * (s.b[i] - s.c[i]);
        const complexd grad = 0.5 * cd * (s.b[i] + s.c[i]);
        e += detail::tw(i, g.n) *
             (std::norm(adot) + std::norm(grad) + v[i] * std::norm(s.a[i]));
    }
    return 0.5 * e * g.h;
}

// d/dt E^K = 2 t int trap W |a|^2 drs (almost-conservation law, Maxwell
// form, reduced per mode).
inline double conformal_maxwell_rhs(const PriceState& s, const RadialGrid& g, double t) {
    double q = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        q += detail::tw(i, g.n) * g.trap[i] * g.w[i] * std::norm(s.a[i]);
    return 2.0 * t * q * g.h;
}

// d/dt E_C = 1/2 t int (2 V_l + rs V_l') |a|^2 drs = t l(l+1) int V_L trap
// |a|^2 drs (scalar-wave form; 2 V_L + rs V_L' = 2 V_L trap).
inline double conformal_wave_rhs(const HarmonicWaveState& s, const RadialGrid& g, double t) {
    const double ll1 = s.mode.eigenvalue();
    double q = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        q += detail::tw(i, g.n) * g.w[i] * g.trap[i] * std::norm(s.a[i]);
    return t * ll1 * q * g.h;
}

// Outward energy flux through the two Sommerfeld boundaries:
// d/dt E = -(|adot|^2_left + |adot|^2_right).
inline double wave_boundary_flux(const HarmonicWaveState& s) {
    return std::norm(s.adot.front()) + std::norm(s.adot.back());
}

// int |a|^2 / (1 + rs^2)^2 drs at one instant.
inline double local_decay_integrand(const HarmonicWaveState& s, const RadialGrid& g) {
    double q = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double w = 1.0 + g.rs[i] * g.rs[i];
        q += detail::tw(i, g.n) * std::norm(s.a[i]) / (w * w);
    }
    return q * g.h;
}

// Surface L2 of the field strength over an areal-radius window,
// int (|E|^2+|B|^2) f r^2 drs = 1/2 int (|b|^2 + |c|^2 + 2 W |a|^2) drs.
inline double surface_l2(const std::vector<PriceState>& states, const RadialGrid& g,
                         double r_lo, double r_hi) {
    const double rs_lo = tortoise_from_r(r_lo, g.params);
    const double rs_hi = tortoise_from_r(r_hi, g.params);
    double q = 0.0;
    for (const PriceState& s : states)
        for (std::size_t i = 0; i < g.n; ++i) {
            if (g.rs[i] < rs_lo || g.rs[i] > rs_hi) continue;
            q += std::norm(s.b[i]) + std::norm(s.c[i]) + 2.0 * g.w[i] * std::norm(s.a[i]);
        }
    return 0.5 * q * g.h;
}

// ---------------------------------------------------------------------------
// Radial multiplier gamma = g d_rs + (d_rs g)/2 with weight
// g = t gtilde(rs) chi_LC(rs/t), gtilde' = 1/(1 + b |rs|^sigma).

struct MultiplierConfig {
    double b = 0.1;
    double sigma_exponent = 1.5; // in (1, 2]

    void validate() const {
        if (!(b > 0.0)) throw config_error("MultiplierConfig: b must be positive");
        if (!(sigma_exponent > 1.0 && sigma_exponent <= 2.0))
            throw config_error("MultiplierConfig: sigma must lie in (1,2]");
    }
};

// chi_LC profile: 1 on |x| <= 1/2, 0 for |x| >= 3/4, C^2 in between.
inline double chi_lc(double x) {
    const double ax = std::abs(x);
    if (ax <= 0.5) return 1.0;
    if (ax >= 0.75) return 0.0;
    return smoothstep_c2((0.75 - ax) / 0.25);
}

inline double chi_lc_d1(double x) {
    const double ax = std::abs(x);
    if (ax <= 0.5 || ax >= 0.75) return 0.0;
    const double u = (0.75 - ax) / 0.25;
    const double ds = 30.0 * u * u * (1.0 - u) * (1.0 - u); // smoothstep'
    return -ds / 0.25 * (x > 0 ? 1.0 : -1.0);
}

inline double chi_lc_d2(double x) {
    const double ax = std::abs(x);
    if (ax <= 0.5 || ax >= 0.75) return 0.0;
    const double u = (0.75 - ax) / 0.25;
    const double d2s = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u); // smoothstep''
    return d2s / (0.25 * 0.25);
}

// Tabulated gtilde and its first two derivatives on the grid; the integral
// is accumulated from rs=0 with per-cell Simpson so the multiplier is
// effectively resolution independent.
struct MultiplierTables {
    MultiplierConfig cfg;
    std::vector<double> gt;   // gtilde
    std::vector<double> gt1;  // gtilde'
    std::vector<double> gt2;  // gtilde''
};

inline MultiplierTables build_multiplier_tables(const RadialGrid& g, const MultiplierConfig& cfg) {
    cfg.validate();
    MultiplierTables t;
    t.cfg = cfg;
    t.gt.assign(g.n, 0.0);
    t.gt1.resize(g.n);
    t.gt2.resize(g.n);
    auto w = [&](double y) { return 1.0 / (1.0 + cfg.b * std::pow(std::abs(y), cfg.sigma_exponent)); };
    for (std::size_t i = 0; i < g.n; ++i) {
        const double y = std::abs(g.rs[i]);
        t.gt1[i] = w(g.rs[i]);
        const double num = cfg.b * cfg.sigma_exponent *
                           (y > 0.0 ? std::pow(y, cfg.sigma_exponent - 1.0) : 0.0);
        t.gt2[i] = -num * t.gt1[i] * t.gt1[i] * (g.rs[i] > 0.0 ? 1.0 : -1.0);
        if (g.rs[i] == 0.0) t.gt2[i] = 0.0;
    }
    // zero of gtilde at rs = 0 (or at the node nearest to it)
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < g.n; ++i)
        if (std::abs(g.rs[i]) < std::abs(g.rs[i0])) i0 = i;
    auto simpson_cell = [&](double x0, double x1) {
        return (x1 - x0) / 6.0 * (w(x0) + 4.0 * w(0.5 * (x0 + x1)) + w(x1));
    };
    double acc = simpson_cell(0.0, g.rs[i0]);
    t.gt[i0] = acc;
    for (std::size_t i = i0 + 1; i < g.n; ++i) {
        acc += simpson_cell(g.rs[i - 1], g.rs[i]);
        t.gt[i] = acc;
    }
    acc = t.gt[i0];
    for (std::size_t i = i0; i > 0; --i) {
        acc -= simpson_cell(g.rs[i - 1], g.rs[i]);
        t.gt[i - 1] = acc;
    }
    return t;
}

// Boundary term E_gamma = int Re(conj(adot) (g d_rs a + (d_rs g) a / 2)) drs.
inline double multiplier_boundary_term(const HarmonicWaveState& s, const RadialGrid& g,
                                       const MultiplierTables& mt, double t,
                                       std::vector<complexd>& da) {
    if (!(t >= 1.0)) throw config_error("multiplier_boundary_term: requires t >= 1");
    detail::diff2(s.a, g.h, da);
    double e = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double xi = g.rs[i] / t;
        const double chi = chi_lc(xi);
        if (chi == 0.0 && chi_lc_d1(xi) == 0.0) continue;
        const double gw = t * mt.gt[i] * chi;
        const double dgw = t * mt.gt1[i] * chi + mt.gt[i] * chi_lc_d1(xi);
        const complexd gamma_a = gw * da[i] + 0.5 * dgw * s.a[i];
        e += detail::tw(i, g.n) * (std::conj(s.adot[i]) * gamma_a).real();
    }
    return e * g.h;
}

inline double multiplier_boundary_term(const HarmonicWaveState& s, const RadialGrid& g,
                                       const MultiplierTables& mt, double t) {
    std::vector<complexd> da;
    return multiplier_boundary_term(s, g, mt, t, da);
}

struct MorawetzGroups {
    // leading:      2 t chi gt' |d_rs a|^2 - t chi V_L' gt l(l+1) |a|^2   (>= 0)
    // zero_order:   t gt'' chi Re(conj(a) d_rs a)       (u^2 group, by parts)
    // cutoff_grad:  2 gt chi' |d_rs a|^2
    // cutoff_zero:  (2 gt' chi' + gt chi''/t) Re(conj(a) d_rs a)
    // time_weight:  -2 gdot Re(conj(adot) d_rs a) - gdot_rs Re(conj(adot) a)
    double leading = 0.0;
    double zero_order = 0.0;
    double cutoff_grad = 0.0;
    double cutoff_zero = 0.0;
    double time_weight = 0.0;

    double total() const { return leading + zero_order + cutoff_grad + cutoff_zero + time_weight; }
};

// Instantaneous bulk integrands of the multiplier identity
//   -2 E_gamma(t2) + 2 E_gamma(t1) = int_t1^t2 (sum of groups) dt.
inline MorawetzGroups morawetz_bulk(const HarmonicWaveState& s, const RadialGrid& g,
                                    const MultiplierTables& mt, double t,
                                    std::vector<complexd>& da) {
    const double ll1 = s.mode.eigenvalue();
    detail::diff2(s.a, g.h, da);
    MorawetzGroups out;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double xi = g.rs[i] / t;
        const double chi = chi_lc(xi);
        const double chi1 = chi_lc_d1(xi);
        const double chi2 = chi_lc_d2(xi);
        if (chi == 0.0 && chi1 == 0.0 && chi2 == 0.0) continue;
        const double wq = detail::tw(i, g.n) * g.h;
        const double grad2 = std::norm(da[i]);
        const double a2 = std::norm(s.a[i]);
        const double a_da = (std::conj(s.a[i]) * da[i]).real();
        const double adot_da = (std::conj(s.adot[i]) * da[i]).real();
        const double adot_a = (std::conj(s.adot[i]) * s.a[i]).real();

        out.leading += wq * (2.0 * t * chi * mt.gt1[i] * grad2 -
                             t * chi * g.w_drs[i] * mt.gt[i] * ll1 * a2);
        out.zero_order += wq * t * mt.gt2[i] * chi * a_da;
        out.cutoff_grad += wq * 2.0 * mt.gt[i] * chi1 * grad2;
        out.cutoff_zero += wq * (2.0 * mt.gt1[i] * chi1 + mt.gt[i] * chi2 / t) * a_da;

        const double gdot = mt.gt[i] * chi - xi * mt.gt[i] * chi1;
        const double gdot_rs = mt.gt1[i] * chi - xi * mt.gt1[i] * chi1 -
                               (g.rs[i] / (t * t)) * mt.gt[i] * chi2;
        out.time_weight += wq * (-2.0 * gdot * adot_da - gdot_rs * adot_a);
    }
    return out;
}

inline MorawetzGroups morawetz_bulk(const HarmonicWaveState& s, const RadialGrid& g,
                                    const MultiplierTables& mt, double t) {
    std::vector<complexd> da;
    return morawetz_bulk(s, g, mt, t, da);
}

// ---------------------------------------------------------------------------
// Hardy estimate: int |f|^2 (1+|rs|)^{-a-2} <= C_H int (|f'|^2 (1+|rs|)^{-a}
// + chi_H |f|^2) over |rs| <= t/2, with C_H = 8/(a+1)^2 + 4/(a+1).

struct HardyBumpSpec {
    double center = 0.0;
    double halfwidth = 0.1; // keep small; the constant absorbs (1+hw)^(2a+2)
};

struct HardyResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

inline HardyResult hardy_check(const std::vector<double>& xs, const std::vector<double>& fs,
                               double t, double alpha, const HardyBumpSpec& bump) {
    if (xs.size() != fs.size() || xs.size() < 8)
        throw config_error("hardy_check: need matching sample arrays");
    if (!(alpha > 0.0)) throw config_error("hardy_check: alpha must be positive");
    const std::size_t n = xs.size();
    const double dx = xs[1] - xs[0];

    // unit-mass C^2 bump
    auto bump_raw = [&](double x) {
        const double xi = std::abs(x - bump.center) / bump.halfwidth;
        return xi >= 1.0 ? 0.0 : smoothstep_c2(1.0 - xi);
    };
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) mass += detail::tw(i, n) * bump_raw(xs[i]);
    mass *= dx;
    if (!(mass > 0.0)) throw config_error("hardy_check: bump not resolved by the samples");

    const double ch = 8.0 / ((alpha + 1.0) * (alpha + 1.0)) + 4.0 / (alpha + 1.0);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(xs[i]) > 0.5 * t) continue;
        double df;
        if (i == 0) df = (fs[1] - fs[0]) / dx;
        else if (i + 1 == n) df = (fs[n - 1] - fs[n - 2]) / dx;
        else df = (fs[i + 1] - fs[i - 1]) / (2.0 * dx);
        const double wabs = 1.0 + std::abs(xs[i]);
        lhs += detail::tw(i, n) * fs[i] * fs[i] / std::pow(wabs, alpha + 2.0);
        rhs += detail::tw(i, n) * (df * df / std::pow(wabs, alpha) +
                                   bump_raw(xs[i]) / mass * fs[i] * fs[i]);
    }
    HardyResult out;
    out.lhs = lhs * dx;
    out.rhs = ch * rhs * dx;
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-12) + 1e-15;
    return out;
}

// ---------------------------------------------------------------------------

// Per-sample energy bookkeeping emitted by a run.
struct EnergyReport {
    double t = 0.0;
    std::vector<double> e_wave;      // per mode
    std::vector<double> e_conf;      // per mode
    double e_T = 0.0;
    double e_K = 0.0;
    double trapping_increment = 0.0; // Maxwell-form RHS over the last interval
    std::map<std::string, double> identity_residuals;
};

// Initial-data norms entering the decay theorems: iterated t/rotation
// derivatives weighted into K- and T-energies, and the pointwise r^{5/2}
// weighted field size.
struct InitialNormReport {
    double sum_EK_lemma = 0.0;   // K <= 1
    double sum_ET_lemma = 0.0;   // K' <= 5
    double sum_EK_theorem = 0.0; // K <= 4
    double sum_ET_theorem = 0.0; // K' <= 8
    double sup_r52_phi = 0.0;
};

namespace detail {

inline PriceState price_time_derivative(const PriceState& s, const RadialGrid& g) {
    const LadderCoefficients lc = ladder_coefficients(s.mode.l);
    PriceState d;
    d.mode = s.mode;
    d.t = s.t;
    d.b.resize(g.n); d.a.resize(g.n); d.c.resize(g.n);
    price_rhs(s.b, s.a, s.c, g, lc.c_up, lc.c_down, d.b, d.a, d.c);
    return d;
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

} // namespace detail

inline InitialNormReport compute_initial_norms(const std::vector<PriceState>& states,
                                               const RadialGrid& g) {
    InitialNormReport rep;
    for (const PriceState& s0 : states) {
        const double ll1 = s0.mode.eigenvalue();
        // time-derivative ladder up to 8 applications
        std::vector<PriceState> dt_states;
        dt_states.push_back(s0);
        for (int k = 1; k <= 8; ++k)
            dt_states.push_back(detail::price_time_derivative(dt_states.back(), g));
        std::vector<double> eT(9), eK(9);
        for (int k = 0; k <= 8; ++k) {
            eT[k] = maxwell_T_energy_mode(dt_states[k], g);
            eK[k] = maxwell_K_energy_mode(dt_states[k], g, s0.t).value;
        }
        auto word_sum = [&](const std::vector<double>& e, int kmax) {
            double total = 0.0;
            for (int k = 0; k <= kmax; ++k)
                for (int j = 0; j <= k; ++j)
                    total += detail::binomial(k, j) * std::pow(ll1, j) * e[k - j];
            return total;
        };
        rep.sum_EK_lemma += word_sum(eK, 1);
        rep.sum_ET_lemma += word_sum(eT, 5);
        rep.sum_EK_theorem += word_sum(eK, 4);
        rep.sum_ET_theorem += word_sum(eT, 8);

        const double rms = 1.0 / std::sqrt(4.0 * M_PI);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double rf = g.r[i] * std::sqrt(g.f[i]);
            const double phi1 = std::abs(s0.b[i]) * rms / rf;
            const double phi0 = std::abs(s0.a[i]) * rms / (g.r[i] * g.r[i]);
            const double phim = std::abs(s0.c[i]) * rms / rf;
            const double r52 = std::pow(g.r[i], 2.5);
            rep.sup_r52_phi = std::max(rep.sup_r52_phi, r52 * (phi1 + phi0 + phim));
        }
    }
    return rep;
}

} // namespace bhmax

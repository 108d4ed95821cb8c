#pragma once

// 1+1 evolution per harmonic: RK4 method-of-lines for the spin-reduced
// wave equation (a, adot) and for the first-order transport triple
// (b, a, c), with Sommerfeld outflow boundaries and a monitored
// redundancy constraint d_rs a = c_down (b + c)/2.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "bhmax/background.hpp"
#include "bhmax/errors.hpp"
#include "bhmax/fields.hpp"
#include "bhmax/spectral.hpp"

namespace bhmax {

struct HarmonicWaveState {
    HarmonicIndex mode;
    double t = 0.0;
    std::vector<complexd> a;
    std::vector<complexd> adot;
};

struct PriceState {
    HarmonicIndex mode;
    double t = 0.0;
    std::vector<complexd> b; // spin +1
    std::vector<complexd> a; // spin 0
    std::vector<complexd> c; // spin -1
};

enum class InitialKind { gaussian, static_charge, custom_table };
enum class TimeSymmetry { time_symmetric, ingoing, outgoing };

struct InitialDataSpec {
    InitialKind kind = InitialKind::gaussian;
    double center = 0.0;
    double width = 4.0;
    double amplitude = 1.0;
    TimeSymmetry time_symmetry = TimeSymmetry::time_symmetric;
    StaticCharge charge;                  // kind == static_charge
    std::vector<complexd> table_a;        // kind == custom_table
    std::vector<complexd> table_adot;
};

// a = A exp(-(rs-rs0)^2/w^2); adot = 0 (time symmetric), +d_rs a (ingoing)
// or -d_rs a (outgoing), the signs chosen so the named pulse direction is
// the direction of travel.
inline HarmonicWaveState init_wave(const InitialDataSpec& spec, const RadialGrid& g,
                                   const HarmonicIndex& mode) {
    HarmonicWaveState s;
    s.mode = mode;
    s.t = 0.0;
    s.a.assign(g.n, 0.0);
    s.adot.assign(g.n, 0.0);

    switch (spec.kind) {
    case InitialKind::gaussian: {
        if (!(spec.width > 0.0)) throw config_error("init_wave: width must be positive");
        const double A = spec.amplitude;
        auto value = [&](double rs) {
            const double z = (rs - spec.center) / spec.width;
            return A * std::exp(-z * z);
        };
        if (std::abs(value(g.rs_min)) > 1e-14 * std::abs(A) ||
            std::abs(value(g.rs_max)) > 1e-14 * std::abs(A))
            throw config_error("init_wave: gaussian support touches the grid boundary");
        for (std::size_t i = 0; i < g.n; ++i) {
            const double v = value(g.rs[i]);
            s.a[i] = v;
            const double dv = -2.0 * (g.rs[i] - spec.center) / (spec.width * spec.width) * v;
            switch (spec.time_symmetry) {
            case TimeSymmetry::time_symmetric: break;
            case TimeSymmetry::ingoing: s.adot[i] = dv; break;
            case TimeSymmetry::outgoing: s.adot[i] = -dv; break;
            }
        }
        break;
    }
    case InitialKind::static_charge: {
        if (mode.l != 0)
            throw config_error("init_wave: static_charge data is the l=0 path only");
        // Phi_0 = r^2 phi_0 = q_E + i q_B; with Y_00 = 1/sqrt(4 pi) the
        // amplitude is sqrt(4 pi) (q_E + i q_B), constant in rs.
        const complexd amp = std::sqrt(4.0 * M_PI) *
                             complexd(spec.charge.q_electric, spec.charge.q_magnetic);
        for (std::size_t i = 0; i < g.n; ++i) s.a[i] = amp;
        break;
    }
    case InitialKind::custom_table: {
        if (spec.table_a.size() != g.n ||
            (!spec.table_adot.empty() && spec.table_adot.size() != g.n))
            throw config_error("init_wave: custom table size does not match the grid");
        s.a = spec.table_a;
        if (!spec.table_adot.empty()) s.adot = spec.table_adot;
        break;
    }
    }
    return s;
}

namespace detail {

// 4th-order first derivative, one-sided at the edges.
inline void diff4(const std::vector<complexd>& u, double h, std::vector<complexd>& du) {
    const std::size_t n = u.size();
    du.resize(n);
    const double s = 1.0 / (12.0 * h);
    du[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) * s;
    du[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) * s;
    for (std::size_t i = 2; i + 2 < n; ++i)
        du[i] = (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) * s;
    du[n - 2] = (3.0 * u[n - 1] + 10.0 * u[n - 2] - 18.0 * u[n - 3] + 6.0 * u[n - 4] -
                 u[n - 5]) * s;
    du[n - 1] = (25.0 * u[n - 1] - 48.0 * u[n - 2] + 36.0 * u[n - 3] - 16.0 * u[n - 4] +
                 3.0 * u[n - 5]) * s;
}

inline void check_finite(const std::vector<complexd>& u, const char* who, double t) {
    for (const complexd& z : u)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw numeric_error(std::string(who) + ": non-finite value at t=" + std::to_string(t));
}

} // namespace detail

// b = (adot + d_rs a)/c_down, c = -(adot - d_rs a)/c_down, with the
// derivative taken at 4th order so the monitored constraint starts at the
// round-off floor.
inline PriceState init_price_from_wave(const HarmonicWaveState& wave, const RadialGrid& g) {
    PriceState s;
    s.mode = wave.mode;
    s.t = wave.t;
    s.a = wave.a;
    s.b.assign(g.n, 0.0);
    s.c.assign(g.n, 0.0);

    if (wave.mode.l == 0) {
        double scale = 0.0, dev = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            scale = std::max(scale, std::abs(wave.a[i]));
            dev = std::max(dev, std::abs(wave.a[i] - wave.a[0]));
            dev = std::max(dev, std::abs(wave.adot[i]));
        }
        if (dev > 1e-12 * std::max(scale, 1e-300))
            throw config_error("init_price_from_wave: no radiatable l=0 mode; "
                               "nonconstant l=0 data is rejected");
        return s;
    }

    const double cd = ladder_coefficients(wave.mode.l).c_down;
    std::vector<complexd> da;
    detail::diff4(wave.a, g.h, da);
    for (std::size_t i = 0; i < g.n; ++i) {
        s.b[i] = (wave.adot[i] + da[i]) / cd;
        s.c[i] = -(wave.adot[i] - da[i]) / cd;
    }
    return s;
}

struct WaveWorkspace {
    std::vector<complexd> ka, kd, ya, yd, sa, sd;
};

namespace detail {

// Sommerfeld pair: the wave exits left toward the horizon (d_t = +d_rs)
// and right toward infinity (d_t = -d_rs), one-sided 2nd-order stencils.
inline void wave_rhs(const std::vector<complexd>& a, const std::vector<complexd>& adot,
                     const RadialGrid& g, const std::vector<double>& v,
                     std::vector<complexd>& da, std::vector<complexd>& dadot) {
    const std::size_t n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    const double ih = 1.0 / (2.0 * g.h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        da[i] = adot[i];
        dadot[i] = (a[i + 1] - 2.0 * a[i] + a[i - 1]) * ih2 - v[i] * a[i];
    }
    da[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) * ih;
    dadot[0] = (-3.0 * adot[0] + 4.0 * adot[1] - adot[2]) * ih;
    da[n - 1] = -(3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) * ih;
    dadot[n - 1] = -(3.0 * adot[n - 1] - 4.0 * adot[n - 2] + adot[n - 3]) * ih;
}

} // namespace detail

inline void step_wave(HarmonicWaveState& s, const RadialGrid& g, double dt, WaveWorkspace& ws) {
    if (!(dt > 0.0) || dt > 0.9 * g.h)
        throw config_error("step_wave: dt violates the CFL cap 0.9 h");
    const std::vector<double>& v = g.potential(s.mode.l);
    const std::size_t n = g.n;

    ws.ka.resize(n); ws.kd.resize(n);
    ws.ya.resize(n); ws.yd.resize(n);
    ws.sa.resize(n); ws.sd.resize(n);

    // classical RK4
    detail::wave_rhs(s.a, s.adot, g, v, ws.ka, ws.kd);
    for (std::size_t i = 0; i < n; ++i) {
        ws.sa[i] = s.a[i] + dt / 6.0 * ws.ka[i];
        ws.sd[i] = s.adot[i] + dt / 6.0 * ws.kd[i];
        ws.ya[i] = s.a[i] + 0.5 * dt * ws.ka[i];
        ws.yd[i] = s.adot[i] + 0.5 * dt * ws.kd[i];
    }
    detail::wave_rhs(ws.ya, ws.yd, g, v, ws.ka, ws.kd);
    for (std::size_t i = 0; i < n; ++i) {
        ws.sa[i] += dt / 3.0 * ws.ka[i];
        ws.sd[i] += dt / 3.0 * ws.kd[i];
        ws.ya[i] = s.a[i] + 0.5 * dt * ws.ka[i];
        ws.yd[i] = s.adot[i] + 0.5 * dt * ws.kd[i];
    }
    detail::wave_rhs(ws.ya, ws.yd, g, v, ws.ka, ws.kd);
    for (std::size_t i = 0; i < n; ++i) {
        ws.sa[i] += dt / 3.0 * ws.ka[i];
        ws.sd[i] += dt / 3.0 * ws.kd[i];
        ws.ya[i] = s.a[i] + dt * ws.ka[i];
        ws.yd[i] = s.adot[i] + dt * ws.kd[i];
    }
    detail::wave_rhs(ws.ya, ws.yd, g, v, ws.ka, ws.kd);
    for (std::size_t i = 0; i < n; ++i) {
        s.a[i] = ws.sa[i] + dt / 6.0 * ws.ka[i];
        s.adot[i] = ws.sd[i] + dt / 6.0 * ws.kd[i];
    }
    s.t += dt;
    detail::check_finite(s.a, "step_wave", s.t);
}

inline void step_wave(HarmonicWaveState& s, const RadialGrid& g, double dt) {
    WaveWorkspace ws;
    step_wave(s, g, dt, ws);
}

struct PriceWorkspace {
    std::vector<complexd> kb, ka, kc, yb, ya, yc, sb, sa, sc;
};

namespace detail {

// Transport right-hand sides.  b advects leftward (upwind stencil biased
// right), c advects rightward; the a equation is pointwise.  At each
// inflow node the advection term is dropped: no signal enters the domain.
inline void price_rhs(const std::vector<complexd>& b, const std::vector<complexd>& a,
                      const std::vector<complexd>& c, const RadialGrid& g, double c_up,
                      double c_down, std::vector<complexd>& db, std::vector<complexd>& da,
                      std::vector<complexd>& dc) {
    const std::size_t n = g.n;
    const double ih = 1.0 / (2.0 * g.h);
    for (std::size_t i = 0; i + 2 < n; ++i)
        db[i] = (-3.0 * b[i] + 4.0 * b[i + 1] - b[i + 2]) * ih - c_up * g.w[i] * a[i];
    db[n - 2] = (b[n - 1] - b[n - 3]) * ih - c_up * g.w[n - 2] * a[n - 2];
    db[n - 1] = -c_up * g.w[n - 1] * a[n - 1];

    for (std::size_t i = 0; i < n; ++i) da[i] = 0.5 * c_down * (b[i] - c[i]);

    dc[0] = c_up * g.w[0] * a[0];
    dc[1] = -(c[2] - c[0]) * ih + c_up * g.w[1] * a[1];
    for (std::size_t i = 2; i < n; ++i)
        dc[i] = -(3.0 * c[i] - 4.0 * c[i - 1] + c[i - 2]) * ih + c_up * g.w[i] * a[i];
}

} // namespace detail

inline void step_price(PriceState& s, const RadialGrid& g, double dt, PriceWorkspace& ws) {
    if (!(dt > 0.0) || dt > 0.9 * g.h)
        throw config_error("step_price: dt violates the CFL cap 0.9 h");
    const LadderCoefficients lc = ladder_coefficients(s.mode.l);
    const std::size_t n = g.n;

    ws.kb.resize(n); ws.ka.resize(n); ws.kc.resize(n);
    ws.yb.resize(n); ws.ya.resize(n); ws.yc.resize(n);
    ws.sb.resize(n); ws.sa.resize(n); ws.sc.resize(n);

    detail::price_rhs(s.b, s.a, s.c, g, lc.c_up, lc.c_down, ws.kb, ws.ka, ws.kc);
    for (std::size_t i = 0; i < n; ++i) {
        ws.sb[i] = s.b[i] + dt / 6.0 * ws.kb[i];
        ws.sa[i] = s.a[i] + dt / 6.0 * ws.ka[i];
        ws.sc[i] = s.c[i] + dt / 6.0 * ws.kc[i];
        ws.yb[i] = s.b[i] + 0.5 * dt * ws.kb[i];
        ws.ya[i] = s.a[i] + 0.5 * dt * ws.ka[i];
        ws.yc[i] = s.c[i] + 0.5 * dt * ws.kc[i];
    }
    detail::price_rhs(ws.yb, ws.ya, ws.yc, g, lc.c_up, lc.c_down, ws.kb, ws.ka, ws.kc);
    for (std::size_t i = 0; i < n; ++i) {
        ws.sb[i] += dt / 3.0 * ws.kb[i];
        ws.sa[i] += dt / 3.0 * ws.ka[i];
        ws.sc[i] += dt / 3.0 * ws.kc[i];
        ws.yb[i] = s.b[i] + 0.5 * dt * ws.kb[i];
        ws.ya[i] = s.a[i] + 0.5 * dt * ws.ka[i];
        ws.yc[i] = s.c[i] + 0.5 * dt * ws.kc[i];
    }
    detail::price_rhs(ws.yb, ws.ya, ws.yc, g, lc.c_up, lc.c_down, ws.kb, ws.ka, ws.kc);
    for (std::size_t i = 0; i < n; ++i) {
        ws.sb[i] += dt / 3.0 * ws.kb[i];
        ws.sa[i] += dt / 3.0 * ws.ka[i];
        ws.sc[i] += dt / 3.0 * ws.kc[i];
        ws.yb[i] = s.b[i] + dt * ws.kb[i];
        ws.ya[i] = s.a[i] + dt * ws.ka[i];
        ws.yc[i] = s.c[i] + dt * ws.kc[i];
    }
    detail::price_rhs(ws.yb, ws.ya, ws.yc, g, lc.c_up, lc.c_down, ws.kb, ws.ka, ws.kc);
    for (std::size_t i = 0; i < n; ++i) {
        s.b[i] = ws.sb[i] + dt / 6.0 * ws.kb[i];
        s.a[i] = ws.sa[i] + dt / 6.0 * ws.ka[i];
        s.c[i] = ws.sc[i] + dt / 6.0 * ws.kc[i];
    }
    s.t += dt;
    detail::check_finite(s.a, "step_price", s.t);
}

inline void step_price(PriceState& s, const RadialGrid& g, double dt) {
    PriceWorkspace ws;
    step_price(s, g, dt, ws);
}

// L2 norm of d_rs a - c_down (b + c)/2 over the central-stencil interior.
inline double constraint_residual(const PriceState& s, const RadialGrid& g) {
    if (s.mode.l == 0) return 0.0;
    const double cd = ladder_coefficients(s.mode.l).c_down;
    std::vector<complexd> da;
    detail::diff4(s.a, g.h, da);
    double sum = 0.0;
    for (std::size_t i = 2; i + 2 < g.n; ++i)
        sum += std::norm(da[i] - 0.5 * cd * (s.b[i] + s.c[i]));
    return std::sqrt(sum * g.h);
}

// Interpolated coordinate amplitudes of a set of modes at one radius, fed
// into the pointwise dictionary.
inline SpinorTriple reconstruct_at(const std::vector<PriceState>& states, const RadialGrid& g,
                                   double theta, double phi_angle, double rs) {
    const RadialGrid::Locator loc = g.locate(rs);
    std::vector<ModeAmplitude> modes;
    modes.reserve(states.size());
    for (const PriceState& s : states) {
        ModeAmplitude ma;
        ma.mode = s.mode;
        const double w1 = 1.0 - loc.frac, w2 = loc.frac;
        ma.b = w1 * s.b[loc.i] + w2 * s.b[loc.i + 1];
        ma.a = w1 * s.a[loc.i] + w2 * s.a[loc.i + 1];
        ma.c = w1 * s.c[loc.i] + w2 * s.c[loc.i + 1];
        modes.push_back(ma);
    }
    const RadialPoint q = radial_point_from_tortoise(rs, g.params);
    return reconstruct_point(modes, theta, phi_angle, q.r, g.params);
}

} // namespace bhmax

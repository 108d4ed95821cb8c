#pragma once

// Schwarzschild exterior geometry in tortoise coordinates: the coordinate
// map r <-> rs, lapse, effective potentials, the trapping term and its
// dominating cutoff, and the radial grid used by the 1+1 solvers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "bhmax/errors.hpp"

namespace bhmax {

struct BackgroundParams {
    double mass = 1.0; // M, geometric units G = c = 1

    void validate() const {
        if (!(mass > 0.0)) throw config_error("BackgroundParams: mass must be positive");
    }
};

// Radius is carried together with the horizon gap delta = r - 2M.  Near the
// horizon delta underflows the representable neighborhood of 2M long before
// it underflows double precision, so the gap, not r itself, is the primary
// quantity.
struct RadialPoint {
    double r = 0.0;     // areal radius
    double delta = 0.0; // r - 2M, always > 0
    double f = 0.0;     // lapse 1 - 2M/r = delta / r, in (0,1)
};

// rs = r + 2M ln((r-2M)/2M) - 3M + 2M ln 2, so that rs(3M) = 0.
inline double tortoise_from_r(double r, const BackgroundParams& p) {
    const double M = p.mass;
    if (!(r > 2.0 * M)) throw std::domain_error("tortoise_from_r: r must exceed 2M");
    return r + 2.0 * M * std::log((r - 2.0 * M) / (2.0 * M)) - 3.0 * M + 2.0 * M * std::log(2.0);
}

inline double tortoise_from_point(const RadialPoint& q, const BackgroundParams& p) {
    const double M = p.mass;
    if (!(q.delta > 0.0)) throw std::domain_error("tortoise_from_point: delta must be positive");
    return (2.0 * M + q.delta) + 2.0 * M * std::log(q.delta / (2.0 * M)) - 3.0 * M +
           2.0 * M * std::log(2.0);
}

// Inverts the tortoise map.  With x = (r-2M)/2M and u = ln x the equation
// rs(r) = rs becomes e^u + u = rs/2M + 1/2 - ln 2, which is strictly
// monotone in u; a bracketed Newton iteration is safe for every real rs.
inline RadialPoint radial_point_from_tortoise(double rs, const BackgroundParams& p) {
    const double M = p.mass;
    const double c = rs / (2.0 * M) + 0.5 - std::log(2.0);

    double lo, hi;
    if (c >= 1.0) {
        lo = std::log(c) - 1.0;
        hi = std::log(c) + 1e-12;
        if (std::exp(hi) + hi - c < 0.0) hi = c; // c barely above 1
    } else {
        lo = c - 1.0;
        hi = c;
    }

    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double eu = std::exp(u);
        const double g = eu + u - c;
        if (g > 0.0) hi = u; else lo = u;
        const double du = -g / (eu + 1.0);
        double next = u + du;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi); // bisection safeguard
        if (std::abs(next - u) < 1e-16 * (1.0 + std::abs(u))) { u = next; break; }
        u = next;
        if (it == 199)
            throw numeric_error("radial_point_from_tortoise: no convergence at rs=" +
                                std::to_string(rs));
    }

    RadialPoint q;
    double x = std::exp(u);
    if (x < std::numeric_limits<double>::denorm_min())
        x = std::numeric_limits<double>::denorm_min(); // keep r strictly outside the horizon
    q.delta = 2.0 * M * x;
    q.r = 2.0 * M * (1.0 + x);
    q.f = x / (1.0 + x);
    return q;
}

inline double r_from_tortoise(double rs, const BackgroundParams& p) {
    return radial_point_from_tortoise(rs, p).r;
}

inline double lapse(double rs, const BackgroundParams& p) {
    return radial_point_from_tortoise(rs, p).f;
}

// V_L = (1 - 2M/r) / r^2; the per-harmonic potential is l(l+1) V_L.
inline double wave_potential_base(double rs, const BackgroundParams& p) {
    const RadialPoint q = radial_point_from_tortoise(rs, p);
    return q.f / (q.r * q.r);
}

inline double wave_potential(int l, double rs, const BackgroundParams& p) {
    if (l < 0) throw std::domain_error("wave_potential: l must be nonnegative");
    if (l == 0) return 0.0;
    return static_cast<double>(l) * (l + 1.0) * wave_potential_base(rs, p);
}

// d V_L / d rs = f * dV_L/dr = -2 f (1 - 3M/r) / r^3
inline double wave_potential_base_drs(double rs, const BackgroundParams& p) {
    const RadialPoint q = radial_point_from_tortoise(rs, p);
    return -2.0 * q.f * (1.0 - 3.0 * p.mass / q.r) / (q.r * q.r * q.r);
}

// Trapping term 1 - (rs/r)(1 - 3M/r): equals 1 at the photon sphere and is
// negative at both ends of the tortoise axis.
inline double trapping_term(double rs, const BackgroundParams& p) {
    const RadialPoint q = radial_point_from_tortoise(rs, p);
    return 1.0 - (rs / q.r) * (1.0 - 3.0 * p.mass / q.r);
}

struct NullCoords {
    double u_plus;  // t + rs
    double u_minus; // t - rs
};

inline NullCoords null_coords(double t, double rs) { return {t + rs, t - rs}; }

struct KruskalCoords {
    double U_plus;
    double U_minus;
    bool saturated = false; // exponent clamped to avoid overflow
};

inline KruskalCoords kruskal_coords(double t, double rs, const BackgroundParams& p) {
    const NullCoords u = null_coords(t, rs);
    KruskalCoords k;
    double ep = u.u_plus / (4.0 * p.mass);
    double em = -u.u_minus / (4.0 * p.mass);
    if (ep > 700.0) { ep = 700.0; k.saturated = true; }
    if (ep < -700.0) { ep = -700.0; k.saturated = true; }
    if (em > 700.0) { em = 700.0; k.saturated = true; }
    if (em < -700.0) { em = -700.0; k.saturated = true; }
    k.U_plus = std::exp(ep);
    k.U_minus = -std::exp(em);
    return k;
}

// Uniform lattice in rs with the geometry precomputed on every node.
struct RadialGrid {
    BackgroundParams params;
    double rs_min = 0.0;
    double rs_max = 0.0;
    std::size_t n = 0;
    double h = 0.0;

    std::vector<double> rs;
    std::vector<double> r;
    std::vector<double> delta; // r - 2M
    std::vector<double> f;     // lapse
    std::vector<double> w;     // V_L = f / r^2
    std::vector<double> w_drs; // d V_L / d rs
    std::vector<double> trap;  // trapping term

    std::vector<int> l_list;
    std::vector<std::vector<double>> v_l; // cached l(l+1) * w per entry of l_list

    const std::vector<double>& potential(int l) const {
        for (std::size_t k = 0; k < l_list.size(); ++k)
            if (l_list[k] == l) return v_l[k];
        throw config_error("RadialGrid: potential for l=" + std::to_string(l) + " not cached");
    }

    // Linear interpolation helpers; rs outside the lattice is an error.
    struct Locator { std::size_t i; double frac; };
    Locator locate(double x) const {
        if (!(x >= rs_min && x <= rs_max))
            throw config_error("RadialGrid: rs=" + std::to_string(x) + " outside grid");
        double s = (x - rs_min) / h;
        std::size_t i = static_cast<std::size_t>(s);
        if (i >= n - 1) i = n - 2;
        return {i, s - static_cast<double>(i)};
    }
    bool contains(double x) const { return x >= rs_min && x <= rs_max; }
};

inline RadialGrid build_grid(const BackgroundParams& p, double rs_min, double rs_max,
                             std::size_t n, std::vector<int> l_list = {}) {
    p.validate();
    if (!(rs_min < 0.0 && 0.0 < rs_max))
        throw config_error("build_grid: require rs_min < 0 < rs_max");
    if (n < 16) throw config_error("build_grid: require n >= 16");

    RadialGrid g;
    g.params = p;
    g.rs_min = rs_min;
    g.rs_max = rs_max;
    g.n = n;
    g.h = (rs_max - rs_min) / static_cast<double>(n - 1);
    g.rs.resize(n);
    g.r.resize(n);
    g.delta.resize(n);
    g.f.resize(n);
    g.w.resize(n);
    g.w_drs.resize(n);
    g.trap.resize(n);

    const bool symmetric = (rs_min == -rs_max) && (n % 2 == 1);
    for (std::size_t i = 0; i < n; ++i) {
        double x = rs_min + static_cast<double>(i) * g.h;
        if (symmetric && i == (n - 1) / 2) x = 0.0; // photon-sphere node pinned exactly
        g.rs[i] = x;
        const RadialPoint q = radial_point_from_tortoise(x, p);
        g.r[i] = q.r;
        g.delta[i] = q.delta;
        g.f[i] = q.f;
        g.w[i] = q.f / (q.r * q.r);
        g.w_drs[i] = -2.0 * q.f * (1.0 - 3.0 * p.mass / q.r) / (q.r * q.r * q.r);
        g.trap[i] = 1.0 - (x / q.r) * (1.0 - 3.0 * p.mass / q.r);
    }

    g.l_list = std::move(l_list);
    g.v_l.resize(g.l_list.size());
    for (std::size_t k = 0; k < g.l_list.size(); ++k) {
        const double ll1 = static_cast<double>(g.l_list[k]) * (g.l_list[k] + 1.0);
        g.v_l[k].resize(n);
        for (std::size_t i = 0; i < n; ++i) g.v_l[k][i] = ll1 * g.w[i];
    }
    return g;
}

// C^2 smoothstep: 0 at x<=0, 1 at x>=1.
inline double smoothstep_c2(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

// Compactly supported bump dominating twice the positive part of the
// trapping term.  The trapping term has its single maximum, value 1, at
// rs = 0, so a plateau of height 2.5 over the positive interval with C^2
// ramps down to zero over a 2M margin satisfies every required inequality.
struct TrappingProfile {
    double rs_left = 0.0;   // zero crossings of the trapping term
    double rs_right = 0.0;
    double support_lo = 0.0; // rs_left - 2M
    double support_hi = 0.0; // rs_right + 2M
    double plateau = 2.5;
    std::vector<double> trap; // trapping term on the grid
    std::vector<double> chi;  // cutoff on the grid

    double value(double x) const {
        if (x <= support_lo || x >= support_hi) return 0.0;
        if (x < rs_left) return plateau * smoothstep_c2((x - support_lo) / (rs_left - support_lo));
        if (x > rs_right) return plateau * smoothstep_c2((support_hi - x) / (support_hi - rs_right));
        return plateau;
    }
};

inline TrappingProfile build_chi_trap(const RadialGrid& g) {
    const BackgroundParams& p = g.params;
    auto crossing = [&](double a, double b) {
        double fa = trapping_term(a, p);
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            const double fm = trapping_term(m, p);
            if ((fa > 0.0) == (fm > 0.0)) { a = m; fa = fm; } else { b = m; }
        }
        return 0.5 * (a + b);
    };

    if (!(trapping_term(g.rs_min, p) < 0.0 && trapping_term(g.rs_max, p) < 0.0))
        throw config_error("build_chi_trap: grid does not contain the trapping interval");

    TrappingProfile t;
    t.rs_left = crossing(g.rs_min, 0.0);
    t.rs_right = crossing(g.rs_max, 0.0); // bisection from the outer negative end
    t.support_lo = t.rs_left - 2.0 * p.mass;
    t.support_hi = t.rs_right + 2.0 * p.mass;
    t.trap = g.trap;
    t.chi.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) t.chi[i] = t.value(g.rs[i]);
    return t;
}

} // namespace bhmax

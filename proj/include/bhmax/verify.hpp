#pragma once

// The identity/invariant battery behind the `verify` command.  Thresholds
// follow the acceptance values at the reference resolution (h_ref for the
// default 4097-node grid) and scale with h^2 where the error model does.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bhmax/io.hpp"
#include "bhmax/report.hpp"
#include "bhmax/run.hpp"

namespace bhmax {

inline constexpr double kReferenceSpacing = 400.0 / 4096.0;

// E^T of the static charge solution by rs-trapezoid over [r_lo, r_hi],
// equal to 2 pi q^2 (1/r_lo - 1/r_hi) up to quadrature error.
struct StaticOracle {
    double quadrature = 0.0;
    double truncated_exact = 0.0;
    double full_exact = 0.0; // pi q^2 / M
};

inline StaticOracle static_T_energy_quadrature(double q_e, double q_b, double mass,
                                               double r_lo, double r_hi, std::size_t n) {
    const BackgroundParams p{mass};
    const double rs_lo = tortoise_from_r(r_lo, p);
    const double rs_hi = tortoise_from_r(r_hi, p);
    const double h = (rs_hi - rs_lo) / static_cast<double>(n - 1);
    const double q2 = q_e * q_e + q_b * q_b;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rs = rs_lo + static_cast<double>(i) * h;
        const RadialPoint pt = radial_point_from_tortoise(rs, p);
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        acc += w * pt.f / (pt.r * pt.r);
    }
    StaticOracle out;
    out.quadrature = 2.0 * M_PI * q2 * acc * h;
    out.truncated_exact = 2.0 * M_PI * q2 * (1.0 / r_lo - 1.0 / r_hi);
    out.full_exact = M_PI * q2 / mass;
    return out;
}

// Max per-step change of a Price state over a few steps; the static l=0
// solution must sit still to round-off.
inline double static_step_residual(const PriceState& state, const RadialGrid& g, double dt,
                                   int steps = 10) {
    PriceState s = state;
    PriceWorkspace ws;
    double worst = 0.0;
    for (int k = 0; k < steps; ++k) {
        const PriceState before = s;
        step_price(s, g, dt, ws);
        double scale = 0.0, change = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            scale = std::max(scale, std::abs(before.a[i]));
            change = std::max(change, std::abs(s.a[i] - before.a[i]));
            change = std::max(change, std::abs(s.b[i] - before.b[i]));
            change = std::max(change, std::abs(s.c[i] - before.c[i]));
        }
        worst = std::max(worst, change / std::max(scale, 1e-300));
    }
    return worst;
}

// Fixed-seed Hardy property suite: random gaussian mixtures on [-t/2,t/2].
struct HardySuiteResult {
    int total = 0;
    int passed = 0;
};

inline HardySuiteResult hardy_property_suite(int count = 1000, unsigned seed = 20240817u) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> n_comp(1, 5);
    std::uniform_real_distribution<double> center(-15.0, 15.0);
    std::uniform_real_distribution<double> width(0.5, 8.0);
    std::uniform_real_distribution<double> amp(-3.0, 3.0);
    const double t = 40.0;
    const double alphas[4] = {0.5, 1.0, 1.5, 2.0};

    const std::size_t n = 4001;
    std::vector<double> xs(n), fs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = -0.5 * t + t * static_cast<double>(i) / static_cast<double>(n - 1);

    HardySuiteResult out;
    for (int k = 0; k < count; ++k) {
        const int nc = n_comp(rng);
        std::vector<double> cs(nc), ws(nc), as(nc);
        for (int j = 0; j < nc; ++j) { cs[j] = center(rng); ws[j] = width(rng); as[j] = amp(rng); }
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (int j = 0; j < nc; ++j) {
                const double z = (xs[i] - cs[j]) / ws[j];
                v += as[j] * std::exp(-z * z);
            }
            fs[i] = v;
        }
        const HardyResult res = hardy_check(xs, fs, t, alphas[k % 4], HardyBumpSpec{0.0, 0.1});
        ++out.total;
        if (res.pass) ++out.passed;
    }
    return out;
}

inline std::vector<CheckResult> verify_run(const RunSeries& run) {
    std::vector<CheckResult> checks;
    const RadialGrid& g = run.grid;
    const double h = g.h;
    const double hscale = (h / kReferenceSpacing) * (h / kReferenceSpacing);

    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, detail});
    };

    { // spectral consistency
        bool ok = true;
        for (int l = 0; l <= 32; ++l) ok = ok && consistency_check(l).consistent;
        double worst = 0.0;
        for (int l = 0; l <= 3; ++l)
            for (int m = -l; m <= l; ++m)
                worst = std::max(worst, angular_oracle_residual(l, m, 16, 16));
        ok = ok && worst < 1e-10;
        add("spectral_consistency", ok, "oracle residual " + detail::fmt(worst));
    }

    { // coordinate round trip on the run's own grid range
        std::mt19937 rng(7u);
        std::uniform_real_distribution<double> u(g.rs_min, g.rs_max);
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const double rs = u(rng);
            const RadialPoint q = radial_point_from_tortoise(rs, g.params);
            worst = std::max(worst, std::abs(tortoise_from_point(q, g.params) - rs));
        }
        add("tortoise_round_trip", worst < 1e-9 * g.params.mass, detail::fmt(worst));
    }

    if (run.has_wave && run.e_wave0 > 0.0) { // flux-accounted energy conservation
        double worst = 0.0;
        for (std::size_t k = 0; k < run.diag_t.size(); ++k)
            worst = std::max(worst, std::abs(run.e_wave_total[k] + run.acc_flux[k] - run.e_wave0));
        const double drift = worst / run.e_wave0;
        add("energy_conservation", drift < std::max(1e-4 * hscale, 1e-7),
            "relative drift " + detail::fmt(drift));
    }

    if (run.has_price && run.config.diag.conformal_identity && run.config.t_final > 2.0) {
        const ConformalResiduals r =
            conformal_identity_residual(run, 1.0, run.config.t_final);
        const double tol = std::max(1e-2 * hscale, 1e-5);
        add("conformal_identity_maxwell", r.maxwell < tol, detail::fmt(r.maxwell));
        if (run.has_wave)
            add("conformal_identity_wave", r.wave < tol, detail::fmt(r.wave));
    }

    if (run.config.diag.morawetz && run.has_wave && run.config.t_final > 2.0 &&
        run.morawetz_t0 > 0.0) {
        const MorawetzResidual r =
            morawetz_identity_residual(run, std::max(1.0, run.morawetz_t0), run.config.t_final);
        add("morawetz_identity", r.residual < std::max(2e-2 * hscale, 1e-5),
            detail::fmt(r.residual));
        bool leading_ok = true;
        for (std::size_t k = 1; k < run.acc_morawetz[0].size(); ++k)
            leading_ok = leading_ok &&
                         run.acc_morawetz[0][k] >= run.acc_morawetz[0][k - 1] - 1e-12;
        add("morawetz_leading_nonnegative", leading_ok, "");
    }

    if (run.has_wave && run.has_price) { // cross-solver agreement at t_final
        double diff = 0.0, scale = 0.0;
        for (std::size_t m = 0; m < run.wave.size(); ++m)
            for (std::size_t i = 0; i < g.n; ++i) {
                diff += std::norm(run.wave[m].a[i] - run.price[m].a[i]);
                scale += std::norm(run.wave[m].a[i]);
            }
        const double rel = std::sqrt(diff / std::max(scale, 1e-300));
        add("price_wave_cross", rel < 10.0 * h * h, "relative L2 " + detail::fmt(rel));
    }

    if (run.has_price) { // constraint residual bounded
        double worst = 0.0;
        for (const PriceState& s : run.price) {
            double scale = 0.0;
            for (std::size_t i = 0; i < g.n; ++i) scale = std::max(scale, std::abs(s.a[i]));
            if (scale > 0.0)
                worst = std::max(worst, constraint_residual(s, g) / scale);
        }
        const double cap = 50.0 * h * h * (1.0 + run.config.t_final);
        add("constraint_residual_bounded", worst < cap, detail::fmt(worst));
    }

    { // local decay: monotone and bounded
        bool mono = true;
        for (std::size_t k = 1; k < run.acc_local_decay.size(); ++k)
            mono = mono && run.acc_local_decay[k] >= run.acc_local_decay[k - 1] - 1e-14;
        const double ratio = local_decay_ratio(run);
        add("local_decay", mono && ratio <= 10.0, "ratio " + detail::fmt(ratio));
    }

    if (run.has_wave && run.config.t_final >= 100.0 && run.e_wave0 > 0.0) {
        double early = 0.0, late = 0.0;
        for (std::size_t k = 0; k < run.diag_t.size(); ++k) {
            if (run.diag_t[k] <= 50.0) early = std::max(early, run.e_C[k]);
            else late = std::max(late, run.e_C[k]);
        }
        add("conformal_energy_plateau", late <= 1.5 * early,
            "late/early " + detail::fmt(late / std::max(early, 1e-300)));
    }

    if (run.config.diag.hardy_suite) {
        const HardySuiteResult r = hardy_property_suite();
        add("hardy_suite", r.passed == r.total,
            std::to_string(r.passed) + "/" + std::to_string(r.total));
    }

    for (const ModeConfig& mc : run.config.modes) {
        if (mc.l != 0 || !run.has_price) continue;
        for (const PriceState& s : run.price)
            if (s.mode.l == 0) {
                const double res = static_step_residual(s, g, run.config.dt());
                add("static_mode_residual", res < 1e-10, detail::fmt(res));
            }
        break;
    }

    return checks;
}

} // namespace bhmax

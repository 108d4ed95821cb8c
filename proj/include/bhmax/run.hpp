#pragma once

// Evolution driver: steps every configured harmonic to t_final with the
// configured solvers, accumulating identity integrands at full step
// resolution (trapezoid in t) and emitting cadence-sampled series.
// Deterministic: fixed mode order, fixed reduction order, no seeding.

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bhmax/analysis.hpp"
#include "bhmax/background.hpp"
#include "bhmax/config.hpp"
#include "bhmax/energetics.hpp"
#include "bhmax/solver.hpp"

namespace bhmax {

struct ProbeSample {
    double t = 0.0;
    double rs = 0.0;
    complexd a_first;      // zero-weight amplitude of the first mode
    double abs_phi1 = 0.0; // sphere-RMS spinor magnitudes over all modes
    double abs_phi0 = 0.0;
    double abs_phim1 = 0.0;
};

struct RaySample {
    int ray_id = 0;
    double param = 0.0;
    double abs_value = 0.0;
};

struct RunSeries {
    RunConfig config;
    RadialGrid grid;

    std::vector<EnergyReport> energies;
    std::vector<ProbeSample> probes;
    std::vector<RaySample> rays;
    std::set<int> rays_truncated;

    std::vector<double> surface_t;
    std::vector<double> surface;

    // cadence-sampled diagnostics; cumulative integrals run from t=0
    // (the multiplier identity from morawetz_t0 >= 1, where the light-cone
    // cutoff is defined)
    std::vector<double> diag_t;
    std::vector<double> e_wave_total;
    std::vector<double> e_T;
    std::vector<double> e_K;
    std::vector<double> e_C;
    std::vector<double> acc_maxwell_rhs;
    std::vector<double> acc_wave_rhs;
    std::vector<double> e_gamma;
    std::vector<double> acc_morawetz[5];
    std::vector<double> acc_local_decay;
    std::vector<double> acc_flux;
    double morawetz_t0 = 0.0;
    double e_wave0 = 0.0;
    double e_T0 = 0.0;

    bool has_wave = false;
    bool has_price = false;
    std::vector<HarmonicWaveState> wave; // final states
    std::vector<PriceState> price;

    std::vector<double> snapshot_t;
    std::vector<std::vector<HarmonicWaveState>> wave_snapshots;
    std::vector<std::vector<PriceState>> price_snapshots;

    InitialNormReport initial_norms;

    std::size_t sample_index(double t) const {
        for (std::size_t k = 0; k < diag_t.size(); ++k)
            if (diag_t[k] >= t - 1e-9) return k;
        throw config_error("RunSeries: no sample at or after t=" + std::to_string(t));
    }

    // (t, value) series of one probe column
    std::vector<std::pair<double, double>> probe_series(double rs, RayComponent comp) const {
        std::vector<std::pair<double, double>> out;
        for (const ProbeSample& p : probes) {
            if (std::abs(p.rs - rs) > 1e-9) continue;
            double v = 0.0;
            switch (comp) {
            case RayComponent::phi1: v = p.abs_phi1; break;
            case RayComponent::phi0: v = p.abs_phi0; break;
            case RayComponent::phim1: v = p.abs_phim1; break;
            default: throw config_error("probe_series: probes store spinor magnitudes only");
            }
            out.push_back({p.t, v});
        }
        return out;
    }

    std::vector<std::pair<double, double>> ray_series(int ray_id) const {
        std::vector<std::pair<double, double>> out;
        for (const RaySample& r : rays)
            if (r.ray_id == ray_id) out.push_back({r.param, r.abs_value});
        return out;
    }
};

namespace detail {

struct RmsAmplitudes {
    double B = 0.0, A = 0.0, C = 0.0; // root-sum-square coordinate amplitudes
    complexd a_first;
};

inline RmsAmplitudes interp_amplitudes(const std::vector<PriceState>& price,
                                       const std::vector<HarmonicWaveState>& wave,
                                       const RadialGrid& g, double rs) {
    const RadialGrid::Locator loc = g.locate(rs);
    const double w1 = 1.0 - loc.frac, w2 = loc.frac;
    RmsAmplitudes out;
    double sb = 0.0, sa = 0.0, sc = 0.0;
    if (!price.empty()) {
        for (std::size_t k = 0; k < price.size(); ++k) {
            const complexd b = w1 * price[k].b[loc.i] + w2 * price[k].b[loc.i + 1];
            const complexd a = w1 * price[k].a[loc.i] + w2 * price[k].a[loc.i + 1];
            const complexd c = w1 * price[k].c[loc.i] + w2 * price[k].c[loc.i + 1];
            if (k == 0) out.a_first = a;
            sb += std::norm(b);
            sa += std::norm(a);
            sc += std::norm(c);
        }
    } else {
        for (std::size_t k = 0; k < wave.size(); ++k) {
            const complexd a = w1 * wave[k].a[loc.i] + w2 * wave[k].a[loc.i + 1];
            if (k == 0) out.a_first = a;
            sa += std::norm(a);
        }
    }
    out.B = std::sqrt(sb);
    out.A = std::sqrt(sa);
    out.C = std::sqrt(sc);
    return out;
}

inline double ray_value(const RmsAmplitudes& amp, const RadialGrid& g, double rs,
                        RayComponent comp) {
    const RadialPoint q = radial_point_from_tortoise(rs, g.params);
    const double rms = 1.0 / std::sqrt(4.0 * M_PI);
    const double rf = q.r * std::sqrt(q.f);
    switch (comp) {
    case RayComponent::Phi1: return amp.B * rms;
    case RayComponent::Phi0: return amp.A * rms;
    case RayComponent::Phim1: return amp.C * rms;
    case RayComponent::phi1: return amp.B * rms / rf;
    case RayComponent::phi0: return amp.A * rms / (q.r * q.r);
    case RayComponent::phim1: return amp.C * rms / rf;
    case RayComponent::r_phim1: return amp.C * rms / std::sqrt(q.f);
    case RayComponent::horizon_phim1: return amp.C * rms / q.f;
    }
    return 0.0;
}

inline bool component_needs_price(RayComponent c) {
    return c != RayComponent::phi0 && c != RayComponent::Phi0;
}

} // namespace detail

inline RunSeries evolve_run(const RunConfig& cfg) {
    cfg.validate();
    RunSeries out;
    out.config = cfg;

    std::vector<int> l_list;
    for (const ModeConfig& mc : cfg.modes) l_list.push_back(mc.l);
    const BackgroundParams params{cfg.mass};
    out.grid = build_grid(params, cfg.grid.rs_min, cfg.grid.rs_max, cfg.grid.n, l_list);
    const RadialGrid& g = out.grid;

    out.has_wave = cfg.solver != SolverChoice::price;
    out.has_price = cfg.solver != SolverChoice::wave;
    for (const RaySpec& r : cfg.rays)
        if (detail::component_needs_price(r.component) && !out.has_price)
            throw config_error("evolve_run: ray component requires the Price solver");

    for (const ModeConfig& mc : cfg.modes) {
        const HarmonicIndex mode = make_harmonic(mc.l, mc.m);
        HarmonicWaveState w = init_wave(mc.init, g, mode);
        if (out.has_price) out.price.push_back(init_price_from_wave(w, g));
        if (out.has_wave) out.wave.push_back(std::move(w));
    }
    if (out.has_price) out.initial_norms = compute_initial_norms(out.price, g);

    MultiplierTables mt;
    const bool do_morawetz = cfg.diag.morawetz && out.has_wave;
    if (do_morawetz) mt = build_multiplier_tables(g, cfg.diag.morawetz_cfg);

    const double dt = cfg.dt();
    const std::size_t n_steps =
        cfg.t_final <= 0.0
            ? 0
            : static_cast<std::size_t>(std::ceil(cfg.t_final / dt * (1.0 - 1e-12)));

    WaveWorkspace wws;
    PriceWorkspace pws;
    std::vector<complexd> da_scratch;

    struct Instant {
        double maxwell = 0.0, wave_rhs = 0.0, local = 0.0, flux = 0.0;
        MorawetzGroups groups;
    };
    auto instantaneous = [&](double t) {
        Instant v;
        if (out.has_price)
            for (const PriceState& s : out.price) v.maxwell += conformal_maxwell_rhs(s, g, t);
        if (out.has_wave) {
            for (const HarmonicWaveState& s : out.wave) {
                v.wave_rhs += conformal_wave_rhs(s, g, t);
                v.local += local_decay_integrand(s, g);
                v.flux += wave_boundary_flux(s);
            }
        } else {
            for (const PriceState& s : out.price) {
                double q = 0.0;
                for (std::size_t i = 0; i < g.n; ++i) {
                    const double w = 1.0 + g.rs[i] * g.rs[i];
                    q += detail::tw(i, g.n) * std::norm(s.a[i]) / (w * w);
                }
                v.local += q * g.h;
            }
        }
        if (do_morawetz && t >= 1.0)
            for (const HarmonicWaveState& s : out.wave) {
                const MorawetzGroups gr = morawetz_bulk(s, g, mt, t, da_scratch);
                v.groups.leading += gr.leading;
                v.groups.zero_order += gr.zero_order;
                v.groups.cutoff_grad += gr.cutoff_grad;
                v.groups.cutoff_zero += gr.cutoff_zero;
                v.groups.time_weight += gr.time_weight;
            }
        return v;
    };

    double acc_maxwell = 0.0, acc_wave = 0.0, acc_local = 0.0, acc_flux_v = 0.0;
    double acc_groups[5] = {0, 0, 0, 0, 0};
    bool morawetz_started = false;

    auto emit_sample = [&](double t) {
        EnergyReport rep;
        rep.t = t;
        double ew_total = 0.0;
        if (out.has_wave) {
            for (const HarmonicWaveState& s : out.wave) {
                const double e = wave_energy(s, g);
                rep.e_wave.push_back(e);
                ew_total += e;
                rep.e_conf.push_back(wave_conformal_energy(s, g, t).value);
            }
        } else {
            for (const PriceState& s : out.price) {
                const double ll1 = s.mode.eigenvalue();
                const double e = ll1 > 0.0 ? wave_energy_from_price(s, g) / ll1 : 0.0;
                rep.e_wave.push_back(e);
                ew_total += e;
                rep.e_conf.push_back(0.0);
            }
        }
        if (out.has_price) {
            rep.e_T = maxwell_T_energy(out.price, g);
            rep.e_K = maxwell_K_energy(out.price, g, t).value;
        }

        out.diag_t.push_back(t);
        out.e_wave_total.push_back(ew_total);
        out.e_T.push_back(rep.e_T);
        out.e_K.push_back(rep.e_K);
        double ec_total = 0.0;
        for (double e : rep.e_conf) ec_total += e;
        out.e_C.push_back(ec_total);
        out.acc_maxwell_rhs.push_back(acc_maxwell);
        out.acc_wave_rhs.push_back(acc_wave);
        out.acc_local_decay.push_back(acc_local);
        out.acc_flux.push_back(acc_flux_v);
        for (int k = 0; k < 5; ++k) out.acc_morawetz[k].push_back(acc_groups[k]);
        double eg = 0.0;
        if (do_morawetz && t >= 1.0)
            for (const HarmonicWaveState& s : out.wave)
                eg += multiplier_boundary_term(s, g, mt, t, da_scratch);
        out.e_gamma.push_back(eg);

        if (out.diag_t.size() == 1) {
            out.e_wave0 = ew_total;
            out.e_T0 = rep.e_T;
        }
        if (out.has_price && out.diag_t.size() > 1) {
            const double lhs = out.e_K.back() - out.e_K.front();
            rep.identity_residuals["conformal_maxwell"] =
                std::abs(lhs - acc_maxwell) /
                std::max(std::abs(lhs), std::max(out.e_T0, 1e-300));
        }
        rep.trapping_increment =
            out.acc_maxwell_rhs.size() >= 2
                ? acc_maxwell - out.acc_maxwell_rhs[out.acc_maxwell_rhs.size() - 2]
                : acc_maxwell;
        out.energies.push_back(std::move(rep));

        for (double prs : cfg.probes) {
            const detail::RmsAmplitudes amp =
                detail::interp_amplitudes(out.price, out.wave, g, prs);
            ProbeSample ps;
            ps.t = t;
            ps.rs = prs;
            ps.a_first = amp.a_first;
            const RadialPoint q = radial_point_from_tortoise(prs, g.params);
            const double rms = 1.0 / std::sqrt(4.0 * M_PI);
            const double rf = q.r * std::sqrt(q.f);
            ps.abs_phi1 = amp.B * rms / rf;
            ps.abs_phi0 = amp.A * rms / (q.r * q.r);
            ps.abs_phim1 = amp.C * rms / rf;
            out.probes.push_back(ps);
        }

        for (std::size_t k = 0; k < cfg.rays.size(); ++k) {
            const RaySpec& r = cfg.rays[k];
            double rs = 0.0, param = 0.0;
            switch (r.kind) {
            case RayKind::fixed_rs: rs = r.parameter; param = t; break;
            case RayKind::outgoing: rs = t - r.parameter; param = t + rs; break;
            case RayKind::ingoing: rs = r.parameter - t; param = t - rs; break;
            case RayKind::fixed_t_slice: continue; // handled at crossing time
            }
            if (!g.contains(rs)) {
                if (r.kind != RayKind::fixed_rs) out.rays_truncated.insert(static_cast<int>(k + 1));
                continue;
            }
            const detail::RmsAmplitudes amp = detail::interp_amplitudes(out.price, out.wave, g, rs);
            out.rays.push_back({static_cast<int>(k + 1), param,
                                detail::ray_value(amp, g, rs, r.component)});
        }

        if (out.has_price && cfg.diag.energies) {
            out.surface_t.push_back(t);
            out.surface.push_back(
                surface_l2(out.price, g, cfg.diag.surface_r_lo, cfg.diag.surface_r_hi));
        }

        if (cfg.outputs.snapshots) {
            out.snapshot_t.push_back(t);
            out.wave_snapshots.push_back(out.wave);
            out.price_snapshots.push_back(out.price);
        }
    };

    std::vector<bool> slice_done(cfg.rays.size(), false);
    auto emit_slices = [&](double t) {
        for (std::size_t k = 0; k < cfg.rays.size(); ++k) {
            const RaySpec& r = cfg.rays[k];
            if (r.kind != RayKind::fixed_t_slice || slice_done[k] || t < r.parameter) continue;
            slice_done[k] = true;
            for (std::size_t i = 0; i < g.n; ++i) {
                const detail::RmsAmplitudes amp =
                    detail::interp_amplitudes(out.price, out.wave, g, g.rs[i]);
                out.rays.push_back({static_cast<int>(k + 1), g.rs[i],
                                    detail::ray_value(amp, g, g.rs[i], r.component)});
            }
        }
    };

    Instant prev = instantaneous(0.0);
    double prev_t = 0.0;
    emit_sample(0.0);
    emit_slices(0.0);
    std::size_t next_sample = 1;

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = std::min(cfg.t_final, static_cast<double>(step + 1) * dt);
        const double step_dt = t - prev_t;
        try {
            for (HarmonicWaveState& s : out.wave) step_wave(s, g, step_dt, wws);
            for (PriceState& s : out.price) step_price(s, g, step_dt, pws);
        } catch (const numeric_error& e) {
            throw numeric_error("evolve_run: step " + std::to_string(step + 1) + ": " + e.what());
        }

        const Instant cur = instantaneous(t);
        acc_local += 0.5 * (prev.local + cur.local) * step_dt;
        acc_flux_v += 0.5 * (prev.flux + cur.flux) * step_dt;
        acc_maxwell += 0.5 * (prev.maxwell + cur.maxwell) * step_dt;
        acc_wave += 0.5 * (prev.wave_rhs + cur.wave_rhs) * step_dt;
        if (do_morawetz && t >= 1.0) {
            if (morawetz_started) {
                acc_groups[0] += 0.5 * (prev.groups.leading + cur.groups.leading) * step_dt;
                acc_groups[1] += 0.5 * (prev.groups.zero_order + cur.groups.zero_order) * step_dt;
                acc_groups[2] += 0.5 * (prev.groups.cutoff_grad + cur.groups.cutoff_grad) * step_dt;
                acc_groups[3] += 0.5 * (prev.groups.cutoff_zero + cur.groups.cutoff_zero) * step_dt;
                acc_groups[4] += 0.5 * (prev.groups.time_weight + cur.groups.time_weight) * step_dt;
            } else {
                out.morawetz_t0 = t;
                morawetz_started = true;
            }
        }
        prev = cur;
        prev_t = t;

        if (t + 1e-12 >= static_cast<double>(next_sample) * cfg.outputs.cadence ||
            step + 1 == n_steps) {
            emit_sample(t);
            emit_slices(t);
            while (static_cast<double>(next_sample) * cfg.outputs.cadence <= t + 1e-12)
                ++next_sample;
        }
    }

    return out;
}

// Identity residual of the almost-conservation law over [t1, t2], both in
// the Maxwell (E^K vs trapping integral) and scalar-wave (E_C) form.
struct ConformalResiduals {
    double maxwell = 0.0;
    double wave = 0.0;
    double lhs_maxwell = 0.0, rhs_maxwell = 0.0;
    double lhs_wave = 0.0, rhs_wave = 0.0;
};

inline ConformalResiduals conformal_identity_residual(const RunSeries& run, double t1, double t2) {
    const std::size_t i1 = run.sample_index(t1);
    const std::size_t i2 = run.sample_index(t2);
    if (i2 <= i1) throw config_error("conformal_identity_residual: empty window");
    ConformalResiduals r;
    if (run.has_price) {
        r.lhs_maxwell = run.e_K[i2] - run.e_K[i1];
        r.rhs_maxwell = run.acc_maxwell_rhs[i2] - run.acc_maxwell_rhs[i1];
        r.maxwell = std::abs(r.lhs_maxwell - r.rhs_maxwell) /
                    std::max(std::abs(r.lhs_maxwell), std::max(run.e_T0, 1e-300));
    }
    if (run.has_wave) {
        r.lhs_wave = run.e_C[i2] - run.e_C[i1];
        r.rhs_wave = run.acc_wave_rhs[i2] - run.acc_wave_rhs[i1];
        r.wave = std::abs(r.lhs_wave - r.rhs_wave) /
                 std::max(std::abs(r.lhs_wave), std::max(run.e_wave0, 1e-300));
    }
    return r;
}

// Multiplier identity residual over [t1, t2] (t1 >= morawetz start) plus
// the accumulated value of each bulk group and the boundary terms.
struct MorawetzResidual {
    double residual = 0.0;
    double lhs = 0.0;       // -2 E_gamma(t2) + 2 E_gamma(t1)
    double rhs = 0.0;       // sum of accumulated groups
    double groups[5] = {0, 0, 0, 0, 0};
    double leading_group = 0.0;
};

inline MorawetzResidual morawetz_identity_residual(const RunSeries& run, double t1, double t2) {
    if (!run.config.diag.morawetz || !run.has_wave)
        throw config_error("morawetz_identity_residual: run lacks multiplier diagnostics");
    if (t1 < 1.0) throw config_error("morawetz_identity_residual: requires t1 >= 1");
    const std::size_t i1 = run.sample_index(t1);
    const std::size_t i2 = run.sample_index(t2);
    if (i2 <= i1) throw config_error("morawetz_identity_residual: empty window");
    MorawetzResidual r;
    r.lhs = -2.0 * run.e_gamma[i2] + 2.0 * run.e_gamma[i1];
    for (int k = 0; k < 5; ++k) {
        r.groups[k] = run.acc_morawetz[k][i2] - run.acc_morawetz[k][i1];
        r.rhs += r.groups[k];
    }
    r.leading_group = r.groups[0];
    r.residual = std::abs(r.lhs - r.rhs) /
                 std::max(std::abs(r.lhs), std::max(run.e_wave0 * (t2 - t1), 1e-300));
    return r;
}

// Accumulated local-decay integral divided by the initial energy.
inline double local_decay_ratio(const RunSeries& run) {
    if (run.acc_local_decay.empty()) return 0.0;
    const double e0 = run.has_wave ? run.e_wave0 : run.e_T0;
    return run.acc_local_decay.back() / std::max(e0, 1e-300);
}

} // namespace bhmax

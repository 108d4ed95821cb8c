#pragma once

// Command dispatch shared by the CLI binary and the harness tests.
// Exit codes: 0 success, 1 check failure, 2 configuration error,
// 3 numeric/I-O error.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "bhmax/config.hpp"
#include "bhmax/io.hpp"
#include "bhmax/report.hpp"
#include "bhmax/run.hpp"
#include "bhmax/verify.hpp"

namespace bhmax {

struct CommandOptions {
    std::string command;
    std::string config_path;
    std::string out_dir;       // overrides outputs.directory when nonempty
    int resolution_scale = 1;
};

inline int max_worker_threads() {
    const char* env = std::getenv("TOOL_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
}

namespace detail {

inline RunConfig load_config(const CommandOptions& opt) {
    RunConfig cfg = opt.config_path.empty() ? RunConfig{} : parse_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.outputs.directory = opt.out_dir;
    if (opt.resolution_scale != 1) {
        cfg.apply_resolution_scale(opt.resolution_scale);
        cfg.validate();
    }
    return cfg;
}

} // namespace detail

inline int command_evolve(const RunConfig& cfg, std::ostream& os) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunSeries run = evolve_run(cfg);
    write_run_outputs(cfg.outputs.directory, run);
    std::vector<CheckResult> checks;
    if (cfg.diag.decay_report) {
        const std::vector<DecayRow> rows = decay_report(run);
        write_decay_csv(cfg.outputs.directory, rows);
        for (const DecayRow& r : rows)
            os << "decay " << r.id << ": " << row_status_name(r.status)
               << " (exponent " << r.exponent << ", bound " << r.bound << "+"
               << r.tolerance << ")\n";
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(cfg.outputs.directory, run, checks, wall);
    os << "evolved " << cfg.modes.size() << " mode(s) to t=" << cfg.t_final << ", outputs in "
       << cfg.outputs.directory << "\n";
    return 0;
}

inline int command_verify(const RunConfig& cfg, std::ostream& os) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunSeries run = evolve_run(cfg);
    const std::vector<CheckResult> checks = verify_run(run);
    bool all = true;
    for (const CheckResult& c : checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) os << " [" << c.detail << "]";
        os << "\n";
        all = all && c.pass;
    }
    if (!cfg.outputs.directory.empty()) {
        write_run_outputs(cfg.outputs.directory, run);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(cfg.outputs.directory, run, checks, wall);
    }
    return all ? 0 : 1;
}

inline int command_decay_fit(const RunConfig& cfg, std::ostream& os) {
    const RunSeries run = load_run_series(cfg.outputs.directory, cfg);
    const std::vector<DecayRow> rows = decay_report(run);
    write_decay_csv(cfg.outputs.directory, rows);
    bool all = true;
    for (const DecayRow& r : rows) {
        os << "decay " << r.id << ": " << row_status_name(r.status) << " (exponent "
           << r.exponent << ", bound " << r.bound << "+" << r.tolerance << ")\n";
        all = all && r.status != RowStatus::fail;
    }
    return all ? 0 : 1;
}

inline int command_energy_report(const RunConfig& cfg, std::ostream& os) {
    RunConfig c = cfg;
    c.diag.decay_report = false;
    const auto t0 = std::chrono::steady_clock::now();
    const RunSeries run = evolve_run(c);
    std::error_code ec;
    std::filesystem::create_directories(c.outputs.directory, ec);
    if (ec) throw numeric_error("cannot create output directory: " + c.outputs.directory);
    write_energies_csv(c.outputs.directory, run);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(c.outputs.directory, run, {}, wall);
    os << "energy series written to " << c.outputs.directory << "/energies.csv\n";
    if (!run.diag_t.empty())
        os << "E_T(0) = " << run.e_T0 << ", E_T(end) = " << run.e_T.back() << "\n";
    return 0;
}

// Appendix-A regression: the static charge field must sit still under the
// Price evolution, and its T-energy quadrature must reproduce the analytic
// pi q^2 / M within the documented truncation level.
inline int command_static(const RunConfig& cfg, std::ostream& os) {
    double q_e = 1.0, q_b = 0.0;
    for (const ModeConfig& mc : cfg.modes)
        if (mc.l == 0 && mc.init.kind == InitialKind::static_charge) {
            q_e = mc.init.charge.q_electric;
            q_b = mc.init.charge.q_magnetic;
        }

    // quadrature on a wide bracket: inner cut 2M + 1e-6, outer 4e3 M
    const StaticOracle oracle = static_T_energy_quadrature(
        q_e, q_b, cfg.mass, 2.0 * cfg.mass + 1e-6, 4000.0 * cfg.mass, 16385);
    const double rel = std::abs(oracle.quadrature - oracle.full_exact) / oracle.full_exact;
    os << "E_T quadrature = " << oracle.quadrature << ", analytic pi q^2/M = "
       << oracle.full_exact << ", relative deviation = " << rel << "\n";

    // evolved residual on the configured grid
    RunConfig c = cfg;
    c.modes.clear();
    ModeConfig mc;
    mc.l = 0;
    mc.m = 0;
    mc.init.kind = InitialKind::static_charge;
    mc.init.charge = StaticCharge{q_e, q_b};
    c.modes.push_back(mc);
    c.solver = SolverChoice::price;
    c.t_final = 0.0;
    const RunSeries run = evolve_run(c);
    const double res = static_step_residual(run.price.front(), run.grid, c.dt());
    os << "static evolution residual per step = " << res << "\n";

    const bool pass = rel < 0.002 && res < 1e-10;
    os << (pass ? "static oracle PASS\n" : "static oracle FAIL\n");
    return pass ? 0 : 1;
}

inline int dispatch(const CommandOptions& opt, std::ostream& os) {
    try {
        const RunConfig cfg = detail::load_config(opt);
        if (opt.command == "evolve") return command_evolve(cfg, os);
        if (opt.command == "verify") return command_verify(cfg, os);
        if (opt.command == "decay-fit") return command_decay_fit(cfg, os);
        if (opt.command == "energy-report") return command_energy_report(cfg, os);
        if (opt.command == "static") return command_static(cfg, os);
        os << "unknown command: " << opt.command << "\n";
        return 2;
    } catch (const config_error& e) {
        os << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        os << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        os << "numeric error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace bhmax

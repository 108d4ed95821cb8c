#pragma once

// CSV persistence.  Floats are written as shortest round-trip decimals so
// reruns of the same config produce byte-identical files.

#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "bhmax/errors.hpp"
#include "bhmax/report.hpp"
#include "bhmax/run.hpp"

namespace bhmax {

inline const char* version_string() { return "bhmax 1.0.0"; }

namespace detail {

inline std::string fmt(double x) {
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw numeric_error("cannot open for writing: " + p.string());
    return f;
}

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= b[i];
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace detail

inline std::string grid_hash(const RadialGrid& g) {
    std::uint64_t h = 1469598103934665603ull;
    h = detail::fnv1a(g.rs.data(), g.rs.size() * sizeof(double), h);
    h = detail::fnv1a(g.r.data(), g.r.size() * sizeof(double), h);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void write_energies_csv(const std::filesystem::path& dir, const RunSeries& run) {
    auto f = detail::open_out(dir / "energies.csv");
    f << "t";
    for (const ModeConfig& mc : run.config.modes)
        f << ",E_wave_" << mc.l << "_" << mc.m << ",E_conf_" << mc.l << "_" << mc.m;
    f << ",E_T,E_K,trap_increment,conf_residual\n";
    for (const EnergyReport& rep : run.energies) {
        f << detail::fmt(rep.t);
        for (std::size_t k = 0; k < run.config.modes.size(); ++k) {
            f << "," << detail::fmt(k < rep.e_wave.size() ? rep.e_wave[k] : 0.0);
            f << "," << detail::fmt(k < rep.e_conf.size() ? rep.e_conf[k] : 0.0);
        }
        const auto it = rep.identity_residuals.find("conformal_maxwell");
        f << "," << detail::fmt(rep.e_T) << "," << detail::fmt(rep.e_K) << ","
          << detail::fmt(rep.trapping_increment) << ","
          << detail::fmt(it == rep.identity_residuals.end() ? 0.0 : it->second) << "\n";
    }
    if (!f) throw numeric_error("write failure: energies.csv");
}

inline void write_probes_csv(const std::filesystem::path& dir, const RunSeries& run) {
    auto f = detail::open_out(dir / "probes.csv");
    f << "t,rs,re_a,im_a,abs_phi1,abs_phi0,abs_phim1\n";
    for (const ProbeSample& p : run.probes)
        f << detail::fmt(p.t) << "," << detail::fmt(p.rs) << ","
          << detail::fmt(p.a_first.real()) << "," << detail::fmt(p.a_first.imag()) << ","
          << detail::fmt(p.abs_phi1) << "," << detail::fmt(p.abs_phi0) << ","
          << detail::fmt(p.abs_phim1) << "\n";
    if (!f) throw numeric_error("write failure: probes.csv");
}

inline void write_rays_csv(const std::filesystem::path& dir, const RunSeries& run) {
    auto f = detail::open_out(dir / "rays.csv");
    f << "ray_id,param,abs_value\n";
    for (const RaySample& r : run.rays)
        f << r.ray_id << "," << detail::fmt(r.param) << "," << detail::fmt(r.abs_value) << "\n";
    if (!f) throw numeric_error("write failure: rays.csv");
}

inline void write_surface_csv(const std::filesystem::path& dir, const RunSeries& run) {
    auto f = detail::open_out(dir / "surface.csv");
    f << "t,surface_l2\n";
    for (std::size_t k = 0; k < run.surface_t.size(); ++k)
        f << detail::fmt(run.surface_t[k]) << "," << detail::fmt(run.surface[k]) << "\n";
    if (!f) throw numeric_error("write failure: surface.csv");
}

inline const char* row_status_name(RowStatus s) {
    switch (s) {
    case RowStatus::pass: return "pass";
    case RowStatus::fail: return "fail";
    case RowStatus::not_evaluated: return "not_evaluated";
    }
    return "not_evaluated";
}

inline void write_decay_csv(const std::filesystem::path& dir, const std::vector<DecayRow>& rows) {
    auto f = detail::open_out(dir / "decay.csv");
    f << "row_id,description,exponent,tolerance,bound,pass\n";
    for (const DecayRow& r : rows)
        f << r.id << "," << r.description << "," << detail::fmt(r.exponent) << ","
          << detail::fmt(r.tolerance) << "," << detail::fmt(r.bound) << ","
          << row_status_name(r.status) << "\n";
    if (!f) throw numeric_error("write failure: decay.csv");
}

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Written once, last; the wall-clock entry is the only nondeterministic
// field in a run directory.
inline void write_manifest(const std::filesystem::path& dir, const RunSeries& run,
                           const std::vector<CheckResult>& checks, double wall_seconds) {
    auto f = detail::open_out(dir / "manifest.txt");
    f << "version = " << version_string() << "\n";
    f << "grid_hash = " << grid_hash(run.grid) << "\n";
    f << "wall_clock_seconds = " << detail::fmt(wall_seconds) << "\n";
    f << "t_final = " << detail::fmt(run.config.t_final) << "\n";
    f << "mass = " << detail::fmt(run.config.mass) << "\n";
    f << "cfl = " << detail::fmt(run.config.cfl) << "\n";
    f << "grid.rs_min = " << detail::fmt(run.config.grid.rs_min) << "\n";
    f << "grid.rs_max = " << detail::fmt(run.config.grid.rs_max) << "\n";
    f << "grid.n = " << run.config.grid.n << "\n";
    for (std::size_t k = 0; k < run.config.modes.size(); ++k)
        f << "mode." << (k + 1) << " = l=" << run.config.modes[k].l
          << ",m=" << run.config.modes[k].m << "\n";
    f << "initial_norms.EK_lemma = " << detail::fmt(run.initial_norms.sum_EK_lemma) << "\n";
    f << "initial_norms.ET_lemma = " << detail::fmt(run.initial_norms.sum_ET_lemma) << "\n";
    f << "initial_norms.EK_theorem = " << detail::fmt(run.initial_norms.sum_EK_theorem) << "\n";
    f << "initial_norms.ET_theorem = " << detail::fmt(run.initial_norms.sum_ET_theorem) << "\n";
    f << "initial_norms.sup_r52_phi = " << detail::fmt(run.initial_norms.sup_r52_phi) << "\n";
    for (const CheckResult& c : checks)
        f << "check." << c.name << " = " << (c.pass ? "pass" : "fail")
          << (c.detail.empty() ? "" : " # " + c.detail) << "\n";
    if (!f) throw numeric_error("write failure: manifest.txt");
}

inline void write_run_outputs(const std::filesystem::path& dir, const RunSeries& run) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw numeric_error("cannot create output directory: " + dir.string());
    write_energies_csv(dir, run);
    write_probes_csv(dir, run);
    write_rays_csv(dir, run);
    write_surface_csv(dir, run);
}

// ---------------------------------------------------------------------------
// Readers used by the decay-fit command on an existing run directory.

namespace detail {

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw numeric_error("cannot open for reading: " + p.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

inline double to_double(const std::string& s, const char* file) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw numeric_error(std::string("malformed number in ") + file + ": " + s);
    }
}

} // namespace detail

// Rebuild the parts of a RunSeries that the decay report consumes.
inline RunSeries load_run_series(const std::filesystem::path& dir, const RunConfig& cfg) {
    RunSeries run;
    run.config = cfg;
    std::vector<int> l_list;
    for (const ModeConfig& mc : cfg.modes) l_list.push_back(mc.l);
    run.grid = build_grid(BackgroundParams{cfg.mass}, cfg.grid.rs_min, cfg.grid.rs_max,
                          cfg.grid.n, l_list);
    run.has_price = cfg.solver != SolverChoice::wave;
    run.has_wave = cfg.solver != SolverChoice::price;

    const auto probes = detail::read_csv(dir / "probes.csv");
    for (std::size_t i = 1; i < probes.size(); ++i) {
        const auto& row = probes[i];
        if (row.size() != 7) throw numeric_error("probes.csv: expected 7 columns");
        ProbeSample p;
        p.t = detail::to_double(row[0], "probes.csv");
        p.rs = detail::to_double(row[1], "probes.csv");
        p.a_first = complexd(detail::to_double(row[2], "probes.csv"),
                             detail::to_double(row[3], "probes.csv"));
        p.abs_phi1 = detail::to_double(row[4], "probes.csv");
        p.abs_phi0 = detail::to_double(row[5], "probes.csv");
        p.abs_phim1 = detail::to_double(row[6], "probes.csv");
        run.probes.push_back(p);
    }

    const auto rays = detail::read_csv(dir / "rays.csv");
    for (std::size_t i = 1; i < rays.size(); ++i) {
        const auto& row = rays[i];
        if (row.size() != 3) throw numeric_error("rays.csv: expected 3 columns");
        RaySample r;
        r.ray_id = static_cast<int>(detail::to_double(row[0], "rays.csv"));
        r.param = detail::to_double(row[1], "rays.csv");
        r.abs_value = detail::to_double(row[2], "rays.csv");
        run.rays.push_back(r);
    }

    if (std::filesystem::exists(dir / "surface.csv")) {
        const auto surf = detail::read_csv(dir / "surface.csv");
        for (std::size_t i = 1; i < surf.size(); ++i) {
            const auto& row = surf[i];
            if (row.size() != 2) throw numeric_error("surface.csv: expected 2 columns");
            run.surface_t.push_back(detail::to_double(row[0], "surface.csv"));
            run.surface.push_back(detail::to_double(row[1], "surface.csv"));
        }
    }
    return run;
}

} // namespace bhmax

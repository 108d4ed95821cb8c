#pragma once

// Run configuration: line-based `key = value` files with dotted sections.
// Unknown keys are rejected; every default is documented in the README.

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bhmax/analysis.hpp"
#include "bhmax/energetics.hpp"
#include "bhmax/errors.hpp"
#include "bhmax/solver.hpp"

namespace bhmax {

enum class SolverChoice { wave, price, both };

struct GridConfig {
    double rs_min = -200.0;
    double rs_max = 200.0;
    std::size_t n = 4097;
};

struct ModeConfig {
    int l = 1;
    int m = 0;
    InitialDataSpec init; // defaults to the unit gaussian at rs=0, width 4
};

struct OutputConfig {
    std::string directory = "out";
    double cadence = 1.0;
    bool snapshots = false; // retain full field snapshots in memory
};

struct DiagnosticsConfig {
    bool energies = true;
    bool conformal_identity = true;
    bool morawetz = false;
    bool hardy_suite = false;
    bool decay_report = false;
    MultiplierConfig morawetz_cfg;
    double surface_r_lo = 2.5;
    double surface_r_hi = 4.0;
    double decay_window_lo = 100.0;
    double decay_window_hi = 500.0;
};

struct RunConfig {
    double mass = 1.0;
    double cfl = 0.5;
    double t_final = 200.0;
    SolverChoice solver = SolverChoice::both;
    GridConfig grid;
    std::vector<ModeConfig> modes;
    std::vector<double> probes;
    std::vector<RaySpec> rays;
    OutputConfig outputs;
    DiagnosticsConfig diag;

    RunConfig() {
        modes.push_back(ModeConfig{});
        probes.push_back(0.0);
    }

    void apply_resolution_scale(int s) {
        if (s != 1 && s != 2 && s != 4)
            throw config_error("resolution scale must be 1, 2 or 4");
        grid.n = (grid.n - 1) * static_cast<std::size_t>(s) + 1;
    }

    void validate() const {
        if (!(mass > 0.0)) throw config_error("config: mass must be positive");
        if (!(cfl > 0.0 && cfl <= 0.9)) throw config_error("config: cfl must lie in (0, 0.9]");
        if (!(t_final >= 0.0)) throw config_error("config: t_final must be nonnegative");
        if (grid.n < 16) throw config_error("config: grid.n must be at least 16 (n >= 16)");
        if (!(grid.rs_min < 0.0 && 0.0 < grid.rs_max))
            throw config_error("config: require grid.rs_min < 0 < grid.rs_max");
        if (modes.empty()) throw config_error("config: at least one mode required");
        for (const ModeConfig& mc : modes) {
            if (mc.l < 0 || std::abs(mc.m) > mc.l)
                throw config_error("config: mode requires l >= 0 and |m| <= l");
            if (mc.l == 0 && mc.init.kind != InitialKind::static_charge)
                throw config_error("config: l=0 is non-radiatable; only static data allowed");
            if (mc.init.kind == InitialKind::gaussian && !(mc.init.width > 0.0))
                throw config_error("config: gaussian width must be positive");
        }
        const double h = (grid.rs_max - grid.rs_min) / static_cast<double>(grid.n - 1);
        if (outputs.cadence < cfl * h)
            throw config_error("config: cadence must be at least one time step (cadence >= dt)");
        for (double p : probes)
            if (!(p >= grid.rs_min && p <= grid.rs_max))
                throw config_error("config: probe outside grid");
        for (const RaySpec& r : rays) {
            if (r.kind == RayKind::fixed_rs &&
                !(r.parameter >= grid.rs_min && r.parameter <= grid.rs_max))
                throw config_error("config: fixed-rs ray outside grid");
            if (r.kind == RayKind::fixed_t_slice &&
                !(r.parameter >= 0.0 && r.parameter <= t_final))
                throw config_error("config: fixed-t ray outside the run window");
        }
        if (diag.morawetz) diag.morawetz_cfg.validate();
        if (!(diag.surface_r_lo > 2.0 * mass && diag.surface_r_hi > diag.surface_r_lo))
            throw config_error("config: surface window must satisfy 2M < r_lo < r_hi");
    }

    double spacing() const {
        return (grid.rs_max - grid.rs_min) / static_cast<double>(grid.n - 1);
    }
    double dt() const { return cfl * spacing(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

inline double parse_number(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config line " + std::to_string(line) + ": not a number: '" + v + "'");
    }
}

inline bool parse_bool(const std::string& v, int line) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw config_error("config line " + std::to_string(line) + ": expected on/off: '" + v + "'");
}

inline RayComponent parse_component(const std::string& v, int line) {
    if (v == "phi1") return RayComponent::phi1;
    if (v == "phi0") return RayComponent::phi0;
    if (v == "phim1") return RayComponent::phim1;
    if (v == "Phi1") return RayComponent::Phi1;
    if (v == "Phi0") return RayComponent::Phi0;
    if (v == "Phim1") return RayComponent::Phim1;
    if (v == "r_phim1") return RayComponent::r_phim1;
    if (v == "horizon_phim1") return RayComponent::horizon_phim1;
    throw config_error("config line " + std::to_string(line) + ": unknown component '" + v + "'");
}

} // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::map<int, ModeConfig> modes;   // explicit modes override the default
    std::map<int, InitialDataSpec> inits;
    std::map<int, double> probes;
    std::map<int, RaySpec> rays;
    bool have_modes = false, have_probes = false;

    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string s = detail::trim(raw);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line) + ": expected key = value");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));

        auto indexed = [&](const std::string& prefix, int& idx) {
            if (key.rfind(prefix + ".", 0) != 0) return false;
            const std::string tail = key.substr(prefix.size() + 1);
            try {
                std::size_t used = 0;
                idx = std::stoi(tail, &used);
                if (used != tail.size() || idx <= 0) throw std::invalid_argument(tail);
            } catch (const std::exception&) {
                throw config_error("config line " + std::to_string(line) +
                                   ": bad index in key '" + key + "'");
            }
            return true;
        };

        int idx = 0;
        if (key == "mass") cfg.mass = detail::parse_number(val, line);
        else if (key == "cfl") cfg.cfl = detail::parse_number(val, line);
        else if (key == "t_final") cfg.t_final = detail::parse_number(val, line);
        else if (key == "solver") {
            if (val == "wave") cfg.solver = SolverChoice::wave;
            else if (val == "price") cfg.solver = SolverChoice::price;
            else if (val == "both") cfg.solver = SolverChoice::both;
            else throw config_error("config line " + std::to_string(line) +
                                    ": solver must be wave|price|both");
        }
        else if (key == "grid.rs_min") cfg.grid.rs_min = detail::parse_number(val, line);
        else if (key == "grid.rs_max") cfg.grid.rs_max = detail::parse_number(val, line);
        else if (key == "grid.n") {
            const double n = detail::parse_number(val, line);
            if (n < 1 || n != std::floor(n))
                throw config_error("config line " + std::to_string(line) + ": grid.n must be a positive integer");
            cfg.grid.n = static_cast<std::size_t>(n);
        }
        else if (indexed("mode", idx)) {
            ModeConfig mc;
            for (const std::string& part : detail::split(val, ',')) {
                const auto kv = detail::split(part, '=');
                if (kv.size() != 2)
                    throw config_error("config line " + std::to_string(line) +
                                       ": mode entries look like l=1,m=0");
                if (kv[0] == "l") mc.l = static_cast<int>(detail::parse_number(kv[1], line));
                else if (kv[0] == "m") mc.m = static_cast<int>(detail::parse_number(kv[1], line));
                else throw config_error("config line " + std::to_string(line) +
                                        ": unknown mode field '" + kv[0] + "'");
            }
            modes[idx] = mc;
            have_modes = true;
        }
        else if (indexed("init", idx)) {
            const auto parts = detail::split(val, ',');
            if (parts.empty())
                throw config_error("config line " + std::to_string(line) + ": empty init");
            InitialDataSpec init;
            if (parts[0] == "gaussian") {
                init.kind = InitialKind::gaussian;
                for (std::size_t k = 1; k < parts.size(); ++k) {
                    const auto kv = detail::split(parts[k], '=');
                    if (kv.size() == 1) {
                        if (kv[0] == "time_symmetric") init.time_symmetry = TimeSymmetry::time_symmetric;
                        else if (kv[0] == "ingoing") init.time_symmetry = TimeSymmetry::ingoing;
                        else if (kv[0] == "outgoing") init.time_symmetry = TimeSymmetry::outgoing;
                        else throw config_error("config line " + std::to_string(line) +
                                                ": unknown init flag '" + kv[0] + "'");
                    } else if (kv[0] == "center") init.center = detail::parse_number(kv[1], line);
                    else if (kv[0] == "width") init.width = detail::parse_number(kv[1], line);
                    else if (kv[0] == "amplitude") init.amplitude = detail::parse_number(kv[1], line);
                    else throw config_error("config line " + std::to_string(line) +
                                            ": unknown init field '" + kv[0] + "'");
                }
            } else if (parts[0] == "static") {
                init.kind = InitialKind::static_charge;
                for (std::size_t k = 1; k < parts.size(); ++k) {
                    const auto kv = detail::split(parts[k], '=');
                    if (kv.size() != 2)
                        throw config_error("config line " + std::to_string(line) + ": bad static init");
                    if (kv[0] == "q_e") init.charge.q_electric = detail::parse_number(kv[1], line);
                    else if (kv[0] == "q_b") init.charge.q_magnetic = detail::parse_number(kv[1], line);
                    else throw config_error("config line " + std::to_string(line) +
                                            ": unknown static field '" + kv[0] + "'");
                }
            } else {
                throw config_error("config line " + std::to_string(line) +
                                   ": init kind must be gaussian|static");
            }
            inits[idx] = init;
        }
        else if (indexed("probe", idx)) {
            probes[idx] = detail::parse_number(val, line);
            have_probes = true;
        }
        else if (indexed("ray", idx)) {
            const auto parts = detail::split(val, ',');
            if (parts.size() < 2)
                throw config_error("config line " + std::to_string(line) +
                                   ": ray looks like kind,parameter[,component]");
            RaySpec r;
            if (parts[0] == "fixed_rs") r.kind = RayKind::fixed_rs;
            else if (parts[0] == "outgoing") r.kind = RayKind::outgoing;
            else if (parts[0] == "ingoing") r.kind = RayKind::ingoing;
            else if (parts[0] == "fixed_t") r.kind = RayKind::fixed_t_slice;
            else throw config_error("config line " + std::to_string(line) +
                                    ": unknown ray kind '" + parts[0] + "'");
            r.parameter = detail::parse_number(parts[1], line);
            if (parts.size() > 2) r.component = detail::parse_component(parts[2], line);
            rays[idx] = r;
        }
        else if (key == "outputs.directory") cfg.outputs.directory = val;
        else if (key == "outputs.cadence") cfg.outputs.cadence = detail::parse_number(val, line);
        else if (key == "outputs.snapshots") cfg.outputs.snapshots = detail::parse_bool(val, line);
        else if (key == "diag.energies") cfg.diag.energies = detail::parse_bool(val, line);
        else if (key == "diag.conformal_identity")
            cfg.diag.conformal_identity = detail::parse_bool(val, line);
        else if (key == "diag.morawetz") cfg.diag.morawetz = detail::parse_bool(val, line);
        else if (key == "diag.morawetz.b")
            cfg.diag.morawetz_cfg.b = detail::parse_number(val, line);
        else if (key == "diag.morawetz.sigma")
            cfg.diag.morawetz_cfg.sigma_exponent = detail::parse_number(val, line);
        else if (key == "diag.hardy_suite") cfg.diag.hardy_suite = detail::parse_bool(val, line);
        else if (key == "diag.decay_report") cfg.diag.decay_report = detail::parse_bool(val, line);
        else if (key == "diag.surface_r_lo") cfg.diag.surface_r_lo = detail::parse_number(val, line);
        else if (key == "diag.surface_r_hi") cfg.diag.surface_r_hi = detail::parse_number(val, line);
        else if (key == "decay.window_lo") cfg.diag.decay_window_lo = detail::parse_number(val, line);
        else if (key == "decay.window_hi") cfg.diag.decay_window_hi = detail::parse_number(val, line);
        else throw config_error("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }

    if (have_modes) {
        cfg.modes.clear();
        for (auto& [i, mc] : modes) {
            auto it = inits.find(i);
            if (it != inits.end()) mc.init = it->second;
            else if (mc.l == 0) mc.init.kind = InitialKind::static_charge;
            cfg.modes.push_back(mc);
        }
        for (const auto& [i, unused] : inits)
            if (!modes.count(i))
                throw config_error("config: init." + std::to_string(i) + " has no matching mode");
    } else if (!inits.empty()) {
        if (inits.size() > 1 || !inits.count(1))
            throw config_error("config: init entries without matching modes");
        cfg.modes[0].init = inits.at(1);
    }
    if (have_probes) {
        cfg.probes.clear();
        for (const auto& [i, p] : probes) cfg.probes.push_back(p);
    }
    for (const auto& [i, r] : rays) cfg.rays.push_back(r);

    cfg.validate();
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace bhmax

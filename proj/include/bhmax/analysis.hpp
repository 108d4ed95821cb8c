#pragma once

// Decay-rate measurement: power-law fits on envelope maxima, ray
// specifications for null sampling, and Richardson convergence estimates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "bhmax/errors.hpp"

namespace bhmax {

enum class RayKind { fixed_rs, outgoing, ingoing, fixed_t_slice };

// Field selector for ray samples.  Lower-case selectors are stationary
// tetrad spinor magnitudes (sphere RMS), capitalized ones the coordinate
// amplitudes; r_phim1 = r |phi_-1| and horizon_phim1 = (1-2M/r)^{-1} |Phi_-1|
// are the weighted combinations the decay rows use.
enum class RayComponent { phi1, phi0, phim1, Phi1, Phi0, Phim1, r_phim1, horizon_phim1 };

struct RaySpec {
    RayKind kind = RayKind::outgoing;
    double parameter = 0.0;  // u- (outgoing), u+ (ingoing), rs (fixed_rs), t (fixed_t_slice)
    RayComponent component = RayComponent::phi0;
};

struct DecayFit {
    double window_lo = 0.0;
    double window_hi = 0.0;
    double exponent = 0.0;
    double amplitude = 0.0;  // prefactor of the fitted power law
    double r_squared = 0.0;
    std::size_t points_used = 0;
    bool envelope_used = false; // strict local maxima (vs every point)
};

// Log-log least squares over envelope maxima of |value|.  A series without
// enough oscillation peaks falls back to fitting every positive point,
// which is the right thing for monotone tails.
inline DecayFit fit_power_law(const std::vector<std::pair<double, double>>& series,
                              double window_lo, double window_hi) {
    if (!(window_hi > window_lo)) throw config_error("fit_power_law: empty window");

    std::vector<std::pair<double, double>> pts;
    for (const auto& s : series) {
        if (s.first < window_lo || s.first > window_hi) continue;
        if (!(s.first > 0.0) || !std::isfinite(s.second)) continue;
        const double v = std::abs(s.second);
        if (v > 0.0) pts.push_back({s.first, v});
    }

    std::vector<std::pair<double, double>> env;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i)
        if (pts[i].second > pts[i - 1].second && pts[i].second >= pts[i + 1].second)
            env.push_back(pts[i]);

    bool envelope_used = env.size() >= 8;
    const std::vector<std::pair<double, double>>& fitpts = envelope_used ? env : pts;
    if (fitpts.size() < 8)
        throw config_error("fit_power_law: fewer than 8 envelope points in window");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(fitpts.size());
    for (const auto& q : fitpts) {
        const double x = std::log(q.first), y = std::log(q.second);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw config_error("fit_power_law: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / n;

    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (const auto& q : fitpts) {
        const double x = std::log(q.first), y = std::log(q.second);
        const double r = y - (icept + slope * x);
        ss_res += r * r;
        ss_tot += (y - ymean) * (y - ymean);
    }

    DecayFit fit;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.exponent = slope;
    fit.amplitude = std::exp(icept);
    fit.r_squared = ss_tot < 1e-300 ? 1.0 : 1.0 - ss_res / ss_tot;
    fit.points_used = fitpts.size();
    fit.envelope_used = envelope_used;
    return fit;
}

struct ConvergenceEstimate {
    double order = 0.0;
    bool saturated = false; // differences at round-off; order not meaningful
    double diff_coarse = 0.0;
    double diff_fine = 0.0;
};

// log2 of successive L2 differences at matched times; the three solutions
// must live on nested grids (each refinement doubles the cell count).
inline ConvergenceEstimate convergence_order(const std::vector<std::complex<double>>& coarse,
                                             const std::vector<std::complex<double>>& mid,
                                             const std::vector<std::complex<double>>& fine,
                                             double h_coarse) {
    const std::size_t n = coarse.size();
    if (mid.size() != 2 * (n - 1) + 1 || fine.size() != 4 * (n - 1) + 1)
        throw config_error("convergence_order: grids are not nested refinements");
    double d12 = 0.0, d23 = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d12 += std::norm(coarse[i] - mid[2 * i]);
        d23 += std::norm(mid[2 * i] - fine[4 * i]);
        scale += std::norm(coarse[i]);
    }
    ConvergenceEstimate est;
    est.diff_coarse = std::sqrt(d12 * h_coarse);
    est.diff_fine = std::sqrt(d23 * h_coarse);
    if (est.diff_fine < 1e-13 * std::max(1e-300, std::sqrt(scale * h_coarse))) {
        est.saturated = true;
        return est;
    }
    est.order = std::log2(est.diff_coarse / est.diff_fine);
    return est;
}

} // namespace bhmax

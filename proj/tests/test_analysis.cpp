#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bhmax/analysis.hpp"

using namespace bhmax;

namespace {
std::vector<std::pair<double, double>> synth(double p, double osc, int n = 400,
                                             double t0 = 10.0, double t1 = 500.0) {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * i / (n - 1.0);
        s.push_back({t, std::pow(t, p) * (1.0 + osc * std::sin(3.0 * t))});
    }
    return s;
}
} // namespace

TEST_CASE("power-law fit on clean data") {
    const DecayFit f = fit_power_law(synth(-2.0, 0.0), 10.0, 500.0);
    CHECK(f.exponent == Catch::Approx(-2.0).margin(1e-3));
    CHECK(f.r_squared > 0.9999);
    CHECK_FALSE(f.envelope_used);
}

TEST_CASE("power-law fit on oscillating envelope") {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < 3000; ++i) {
        const double t = 10.0 + 490.0 * i / 2999.0;
        s.push_back({t, std::pow(t, -3.0) * (2.0 + std::sin(t))});
    }
    const DecayFit f = fit_power_law(s, 10.0, 500.0);
    CHECK(f.envelope_used);
    CHECK(f.exponent == Catch::Approx(-3.0).margin(0.05));
}

TEST_CASE("constant series fits zero exponent") {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < 100; ++i) s.push_back({10.0 + i, 0.731});
    const DecayFit f = fit_power_law(s, 10.0, 200.0);
    CHECK(f.exponent == Catch::Approx(0.0).margin(1e-3));
}

TEST_CASE("planted exponents recovered") {
    for (double p : {-0.5, -1.0, -1.5, -2.0, -3.0}) {
        CHECK(fit_power_law(synth(p, 0.0), 10.0, 500.0).exponent ==
              Catch::Approx(p).margin(0.05));
        CHECK(fit_power_law(synth(p, 0.1, 4000), 10.0, 500.0).exponent ==
              Catch::Approx(p).margin(0.15));
    }
}

TEST_CASE("insufficient data raises") {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < 5; ++i) s.push_back({10.0 + i, 1.0 / (10.0 + i)});
    CHECK_THROWS_AS(fit_power_law(s, 10.0, 20.0), config_error);
    CHECK_THROWS_AS(fit_power_law(synth(-1.0, 0.0), 600.0, 700.0), config_error);
    CHECK_THROWS_AS(fit_power_law(synth(-1.0, 0.0), 20.0, 10.0), config_error);
}

TEST_CASE("convergence order estimation") {
    // u_h = u + C h^2 v on nested grids
    const std::size_t n = 101;
    auto make = [&](int refine) {
        const std::size_t nn = (n - 1) * (1u << refine) + 1;
        std::vector<std::complex<double>> u(nn);
        const double h = 1.0 / static_cast<double>(nn - 1);
        for (std::size_t i = 0; i < nn; ++i) {
            const double x = static_cast<double>(i) * h;
            u[i] = std::sin(6.28 * x) + h * h * std::cos(3.0 * x);
        }
        return u;
    };
    const ConvergenceEstimate est = convergence_order(make(0), make(1), make(2), 1.0 / (n - 1.0));
    CHECK_FALSE(est.saturated);
    CHECK(est.order == Catch::Approx(2.0).margin(0.2));

    // identical solutions at all resolutions: saturated
    auto exact = [&](int refine) {
        const std::size_t nn = (n - 1) * (1u << refine) + 1;
        std::vector<std::complex<double>> u(nn);
        for (std::size_t i = 0; i < nn; ++i)
            u[i] = std::sin(6.28 * static_cast<double>(i) / static_cast<double>(nn - 1));
        return u;
    };
    CHECK(convergence_order(exact(0), exact(1), exact(2), 1.0 / (n - 1.0)).saturated);

    CHECK_THROWS_AS(convergence_order(make(0), make(0), make(2), 0.01), config_error);
}

TEST_CASE("first-order fixture measures order one") {
    // upwind advection of a gaussian: deliberately 1st-order transport
    auto solve = [](std::size_t nn) {
        const double h = 100.0 / static_cast<double>(nn - 1);
        const double dt = 0.5 * h;
        std::vector<std::complex<double>> u(nn), next(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            const double x = -50.0 + static_cast<double>(i) * h;
            u[i] = std::exp(-(x + 20.0) * (x + 20.0) / 25.0);
        }
        double t = 0.0;
        while (t < 20.0 - 1e-9) {
            next[0] = 0.0;
            for (std::size_t i = 1; i < nn; ++i)
                next[i] = u[i] - dt / h * (u[i] - u[i - 1]);
            u.swap(next);
            t += dt;
        }
        return u;
    };
    const std::size_t n = 401;
    const ConvergenceEstimate est =
        convergence_order(solve(n), solve(2 * (n - 1) + 1), solve(4 * (n - 1) + 1),
                          100.0 / (n - 1.0));
    CHECK(est.order == Catch::Approx(1.0).margin(0.2));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bhmax/background.hpp"

using namespace bhmax;

namespace {
const BackgroundParams M1{1.0};

// independent inverse: bisection in u = ln((r-2M)/2M) on the monotone map
double bisect_r_from_rs(double rs, const BackgroundParams& p) {
    auto T = [&](double u) {
        const double x = std::exp(u);
        return 2.0 * p.mass * (1.0 + x) + 2.0 * p.mass * u - 3.0 * p.mass +
               2.0 * p.mass * std::log(2.0);
    };
    double lo = -800.0, hi = 30.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (T(mid) < rs) lo = mid; else hi = mid;
    }
    return 2.0 * p.mass * (1.0 + std::exp(0.5 * (lo + hi)));
}
} // namespace

TEST_CASE("tortoise coordinate closed form") {
    CHECK(tortoise_from_r(3.0, M1) == Catch::Approx(0.0).margin(1e-14));
    CHECK(tortoise_from_r(4.0, M1) == Catch::Approx(1.0 + 2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(tortoise_from_r(2.0 + 1e-8, M1) < -30.0);
    CHECK_THROWS_AS(tortoise_from_r(2.0, M1), std::domain_error);
    CHECK_THROWS_AS(tortoise_from_r(1.5, M1), std::domain_error);
}

TEST_CASE("tortoise forward map agrees with integrating dr/drs = 1-2M/r") {
    // RK4 integration of dr/drs from the photon sphere to rs(r=4)
    const double rs_target = tortoise_from_r(4.0, M1);
    double r = 3.0;
    const int n = 20000;
    const double h = rs_target / n;
    for (int i = 0; i < n; ++i) {
        auto f = [](double rr) { return 1.0 - 2.0 / rr; };
        const double k1 = f(r);
        const double k2 = f(r + 0.5 * h * k1);
        const double k3 = f(r + 0.5 * h * k2);
        const double k4 = f(r + h * k3);
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    CHECK(r == Catch::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("tortoise inversion") {
    CHECK(r_from_tortoise(0.0, M1) == Catch::Approx(3.0).epsilon(1e-13));

    const RadialPoint deep = radial_point_from_tortoise(-60.0, M1);
    CHECK(deep.delta > 0.0);
    CHECK(deep.delta < 1e-10);
    CHECK(bisect_r_from_rs(-60.0, M1) == Catch::Approx(deep.r).margin(1e-12));

    const double r1000 = r_from_tortoise(1000.0, M1);
    CHECK(std::abs(tortoise_from_r(r1000, M1) - 1000.0) < 1e-9);

    // extreme arguments do not throw and stay outside the horizon
    CHECK(radial_point_from_tortoise(-1e6, M1).delta > 0.0);
    CHECK(radial_point_from_tortoise(1e6, M1).r > 1e5);
}

TEST_CASE("round trip over the working range") {
    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double rs = -500.0 + u(rng) * (1e4 + 500.0);
        const RadialPoint q = radial_point_from_tortoise(rs, M1);
        CHECK(std::abs(tortoise_from_point(q, M1) - rs) < 1e-9);
    }
}

TEST_CASE("wave potential") {
    CHECK(wave_potential(0, -3.0, M1) == 0.0);
    CHECK(wave_potential(0, 17.0, M1) == 0.0);
    CHECK(wave_potential(1, 0.0, M1) == Catch::Approx(2.0 / 27.0).epsilon(1e-12));

    // peak within one cell of rs = 0 for every l >= 1
    const RadialGrid g = build_grid(M1, -40.0, 40.0, 1601, {1, 2, 3, 4});
    for (int l = 1; l <= 4; ++l) {
        const std::vector<double>& v = g.potential(l);
        std::size_t imax = 0;
        for (std::size_t i = 1; i < g.n; ++i)
            if (v[i] > v[imax]) imax = i;
        CHECK(std::abs(g.rs[imax]) <= g.h + 1e-12);
    }
}

TEST_CASE("trapping term sign structure") {
    CHECK(trapping_term(0.0, M1) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(trapping_term(-100.0, M1) < 0.0);
    CHECK(trapping_term(1e4, M1) < 0.0);
    CHECK(trapping_term(-1000.0, M1) < 0.0);
    CHECK(trapping_term(1000.0, M1) < 0.0);

    // positive set is one interval containing 0
    const RadialGrid g = build_grid(M1, -60.0, 60.0, 2401, {});
    int sign_changes = 0;
    for (std::size_t i = 1; i < g.n; ++i)
        if ((g.trap[i] > 0.0) != (g.trap[i - 1] > 0.0)) ++sign_changes;
    CHECK(sign_changes == 2);
    CHECK(g.trap[g.n / 2] > 0.0);
}

TEST_CASE("lapse") {
    CHECK(lapse(0.0, M1) == Catch::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(lapse(-200.0, M1) < 1e-40);
    CHECK(lapse(-200.0, M1) > 0.0);
    CHECK(std::abs(lapse(1e6, M1) - 1.0) < 1e-5);
}

TEST_CASE("null and kruskal coordinates") {
    const NullCoords u0 = null_coords(0.0, 0.0);
    CHECK(u0.u_plus == 0.0);
    CHECK(u0.u_minus == 0.0);
    const KruskalCoords k0 = kruskal_coords(0.0, 0.0, M1);
    CHECK(k0.U_plus == Catch::Approx(1.0));
    CHECK(k0.U_minus == Catch::Approx(-1.0));
    CHECK_FALSE(k0.saturated);

    // the t=0 slice is U+ = -U- (the ratio is -1 for every rs)
    for (double rs : {-30.0, -3.0, 0.0, 5.0, 120.0}) {
        const KruskalCoords k = kruskal_coords(0.0, rs, M1);
        CHECK(k.U_plus / k.U_minus == Catch::Approx(-1.0).epsilon(1e-12));
        CHECK(k.U_plus > 0.0);
        CHECK(k.U_minus < 0.0);
    }

    const NullCoords u1 = null_coords(10.0, -3.0);
    CHECK(u1.u_plus == 7.0);
    CHECK(u1.u_minus == 13.0);

    const KruskalCoords sat = kruskal_coords(3000.0, 0.0, M1);
    CHECK(sat.saturated);
    CHECK(std::isfinite(sat.U_plus));
}

TEST_CASE("grid construction") {
    const RadialGrid g = build_grid(M1, -200.0, 200.0, 4097, {1});
    CHECK(g.h == Catch::Approx(400.0 / 4096.0).epsilon(1e-15));
    for (std::size_t i = 1; i < g.n; ++i) {
        CHECK(g.rs[i] > g.rs[i - 1]);
        // r monotone; near the horizon the increase lives in the gap field
        CHECK(g.r[i] >= g.r[i - 1]);
        CHECK(g.delta[i] > g.delta[i - 1]);
        CHECK(g.f[i] > 0.0);
        CHECK(g.f[i] < 1.0);
    }
    CHECK(g.rs[(g.n - 1) / 2] == 0.0);
    CHECK(std::abs(g.r[(g.n - 1) / 2] - 3.0) < 1e-10);

    CHECK_THROWS_AS(build_grid(M1, 1.0, 200.0, 4097, {}), config_error);
    CHECK_THROWS_AS(build_grid(M1, -200.0, 200.0, 8, {}), config_error);
}

TEST_CASE("dr/drs matches the lapse at second order") {
    auto max_err = [&](std::size_t n) {
        const RadialGrid g = build_grid(M1, -50.0, 50.0, n, {});
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < g.n; ++i) {
            const double fd = (g.r[i + 1] - g.r[i - 1]) / (2.0 * g.h);
            worst = std::max(worst, std::abs(fd - g.f[i]));
        }
        return worst;
    };
    const double e1 = max_err(501);
    const double e2 = max_err(1001);
    CHECK(e1 / e2 == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("trapping cutoff profile") {
    const RadialGrid g = build_grid(M1, -60.0, 60.0, 2401, {});
    const TrappingProfile t = build_chi_trap(g);
    CHECK(t.rs_left < 0.0);
    CHECK(t.rs_right > 0.0);
    CHECK(std::abs(trapping_term(t.rs_left, M1)) < 1e-10);
    CHECK(std::abs(trapping_term(t.rs_right, M1)) < 1e-10);

    CHECK(t.value(0.0) >= 2.0);
    CHECK(t.value(t.rs_right + 3.0) == 0.0);
    CHECK(t.value(t.support_lo - 1.0) == 0.0);

    for (std::size_t i = 0; i < g.n; ++i) {
        const double pos = std::max(0.0, g.trap[i]);
        CHECK(t.chi[i] >= 2.0 * pos - 1e-12);
    }

    const RadialGrid small = build_grid(M1, -1.0, 1.0, 64, {});
    CHECK_THROWS_AS(build_chi_trap(small), config_error);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bhmax/energetics.hpp"
#include "bhmax/solver.hpp"

using namespace bhmax;

namespace {
const BackgroundParams M1{1.0};

InitialDataSpec gaussian(double center, double width, double amp,
                         TimeSymmetry ts = TimeSymmetry::time_symmetric) {
    InitialDataSpec s;
    s.kind = InitialKind::gaussian;
    s.center = center;
    s.width = width;
    s.amplitude = amp;
    s.time_symmetry = ts;
    return s;
}
} // namespace

TEST_CASE("initial data construction") {
    const RadialGrid g = build_grid(M1, -100.0, 100.0, 1001, {1});
    const HarmonicIndex l1 = make_harmonic(1, 0);

    const HarmonicWaveState zero = init_wave(gaussian(0.0, 4.0, 0.0), g, l1);
    for (std::size_t i = 0; i < g.n; ++i) {
        CHECK(std::abs(zero.a[i]) == 0.0);
        CHECK(std::abs(zero.adot[i]) == 0.0);
    }

    const HarmonicWaveState ts = init_wave(gaussian(0.0, 4.0, 1.0), g, l1);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(std::abs(ts.adot[i]) == 0.0);

    // support touching the boundary is rejected
    CHECK_THROWS_AS(init_wave(gaussian(90.0, 8.0, 1.0), g, l1), config_error);
    CHECK_THROWS_AS(init_wave(gaussian(0.0, -1.0, 1.0), g, l1), config_error);
}

TEST_CASE("outgoing data radiates through the right boundary first") {
    const RadialGrid g = build_grid(M1, -60.0, 60.0, 601, {1});
    HarmonicWaveState s =
        init_wave(gaussian(0.0, 4.0, 1.0, TimeSymmetry::outgoing), g, make_harmonic(1, 0));
    WaveWorkspace ws;
    const double dt = 0.5 * g.h;
    double flux_right = 0.0, flux_left = 0.0;
    while (s.t < 70.0) {
        step_wave(s, g, dt, ws);
        flux_right += std::norm(s.adot.back()) * dt;
        flux_left += std::norm(s.adot.front()) * dt;
    }
    // the direct pulse exits right; only potential backscatter goes left
    CHECK(flux_right > 10.0 * flux_left);
    CHECK(flux_right > 0.01);
}

TEST_CASE("price initialization from wave data") {
    const RadialGrid g = build_grid(M1, -100.0, 100.0, 1001, {0, 1});

    // constant a with zero adot gives b = c = 0
    InitialDataSpec table;
    table.kind = InitialKind::custom_table;
    table.table_a.assign(g.n, complexd(0.7, -0.1));
    const PriceState flat = init_price_from_wave(init_wave(table, g, make_harmonic(1, 0)), g);
    for (std::size_t i = 0; i < g.n; ++i) {
        CHECK(std::abs(flat.b[i]) < 1e-13);
        CHECK(std::abs(flat.c[i]) < 1e-13);
    }

    // l=0 nonconstant data is rejected
    InitialDataSpec bad;
    bad.kind = InitialKind::custom_table;
    bad.table_a.assign(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i)
        bad.table_a[i] = std::exp(-g.rs[i] * g.rs[i] / 16.0);
    CHECK_THROWS_AS(init_price_from_wave(init_wave(bad, g, make_harmonic(0, 0)), g),
                    config_error);

    // transport-implied time derivative reproduces adot exactly
    const HarmonicWaveState w =
        init_wave(gaussian(0.0, 6.0, 1.0, TimeSymmetry::ingoing), g, make_harmonic(1, 0));
    const PriceState p = init_price_from_wave(w, g);
    const double cd = ladder_coefficients(1).c_down;
    for (std::size_t i = 0; i < g.n; ++i)
        CHECK(std::abs(0.5 * cd * (p.b[i] - p.c[i]) - w.adot[i]) < 1e-12);
}

TEST_CASE("wave stepping basics") {
    const RadialGrid g = build_grid(M1, -50.0, 50.0, 501, {1});
    HarmonicWaveState s = init_wave(gaussian(0.0, 4.0, 0.0), g, make_harmonic(1, 0));
    WaveWorkspace ws;
    step_wave(s, g, 0.4 * g.h, ws);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(std::abs(s.a[i]) == 0.0);

    CHECK_THROWS_AS(step_wave(s, g, g.h, ws), config_error);

    HarmonicWaveState bad = init_wave(gaussian(0.0, 4.0, 1.0), g, make_harmonic(1, 0));
    bad.a[250] = complexd(std::nan(""), 0.0);
    CHECK_THROWS_AS(step_wave(bad, g, 0.4 * g.h, ws), numeric_error);
}

TEST_CASE("free pulse translates at unit speed") {
    // l=0 has V = 0: d'Alembert transport of a right-mover
    const RadialGrid g = build_grid(M1, -80.0, 80.0, 3201, {0});
    InitialDataSpec spec = gaussian(-20.0, 5.0, 1.0, TimeSymmetry::outgoing);
    HarmonicWaveState s = init_wave(spec, g, make_harmonic(0, 0));
    WaveWorkspace ws;
    const double dt = 0.5 * g.h;
    std::size_t steps = 0;
    while (s.t < 40.0 - 1e-9) {
        step_wave(s, g, dt, ws);
        ++steps;
    }
    const double travelled = static_cast<double>(steps) * dt;
    // centroid of |a|^2
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        num += g.rs[i] * std::norm(s.a[i]);
        den += std::norm(s.a[i]);
    }
    const double center = num / den;
    CHECK(center == Catch::Approx(-20.0 + travelled).margin(20.0 * g.h * g.h + 1e-6));
    // amplitude preserved
    double peak = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) peak = std::max(peak, std::abs(s.a[i]));
    CHECK(peak == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("price stepping basics") {
    const RadialGrid g = build_grid(M1, -60.0, 60.0, 601, {0, 1});
    PriceWorkspace ws;

    PriceState zero;
    zero.mode = make_harmonic(1, 0);
    zero.b.assign(g.n, 0.0);
    zero.a.assign(g.n, 0.0);
    zero.c.assign(g.n, 0.0);
    step_price(zero, g, 0.4 * g.h, ws);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(std::abs(zero.a[i]) == 0.0);

    // l=0 profile with b = c = 0 is frozen regardless of its radial shape
    PriceState stat;
    stat.mode = make_harmonic(0, 0);
    stat.b.assign(g.n, 0.0);
    stat.c.assign(g.n, 0.0);
    stat.a.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) stat.a[i] = 5.0 / (g.r[i] * g.r[i]);
    const PriceState before = stat;
    for (int k = 0; k < 25; ++k) step_price(stat, g, 0.4 * g.h, ws);
    for (std::size_t i = 0; i < g.n; ++i) {
        CHECK(std::abs(stat.a[i] - before.a[i]) < 1e-12);
        CHECK(std::abs(stat.b[i]) < 1e-12);
        CHECK(std::abs(stat.c[i]) < 1e-12);
    }

    CHECK_THROWS_AS(step_price(zero, g, g.h, ws), config_error);
}

TEST_CASE("constraint residual") {
    const RadialGrid g = build_grid(M1, -100.0, 100.0, 2001, {1});
    PriceState zero;
    zero.mode = make_harmonic(1, 0);
    zero.b.assign(g.n, 0.0);
    zero.a.assign(g.n, 0.0);
    zero.c.assign(g.n, 0.0);
    CHECK(constraint_residual(zero, g) == 0.0);

    const HarmonicWaveState w = init_wave(gaussian(0.0, 5.0, 1.0), g, make_harmonic(1, 0));
    PriceState p = init_price_from_wave(w, g);
    CHECK(constraint_residual(p, g) < 1e-12); // same 4th-order operator by construction

    // stays small after evolving
    PriceWorkspace ws;
    for (int k = 0; k < 400; ++k) step_price(p, g, 0.5 * g.h, ws);
    double scale = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) scale = std::max(scale, std::abs(p.a[i]));
    CHECK(constraint_residual(p, g) < 10.0 * g.h * g.h * scale * 20.0);
}

TEST_CASE("pointwise reconstruction from evolved states") {
    const RadialGrid g = build_grid(M1, -60.0, 60.0, 601, {1});
    const HarmonicWaveState w = init_wave(gaussian(0.0, 5.0, 1.0), g, make_harmonic(1, 0));
    PriceState p = init_price_from_wave(w, g);
    const SpinorTriple s = reconstruct_at({p}, g, 0.3, 1.2, 0.0);
    const double expected =
        (std::sqrt(3.0 / (4.0 * M_PI)) * std::cos(0.3) / 9.0) * 1.0; // a(0)=1, r=3
    CHECK(s.phi_0.real() == Catch::Approx(expected).epsilon(1e-9));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bhmax/fields.hpp"

using namespace bhmax;

namespace {
const BackgroundParams M1{1.0};

EBComponents random_eb(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    EBComponents eb;
    eb.E_r = u(rng); eb.E_theta = u(rng); eb.E_phi = u(rng);
    eb.B_r = u(rng); eb.B_theta = u(rng); eb.B_phi = u(rng);
    return eb;
}
} // namespace

TEST_CASE("spinor components from E and B") {
    const SpinorTriple zero = phi_from_EB(EBComponents{});
    CHECK(std::abs(zero.phi_p) == 0.0);
    CHECK(std::abs(zero.phi_0) == 0.0);
    CHECK(std::abs(zero.phi_m) == 0.0);

    EBComponents radial;
    radial.E_r = 1.0;
    const SpinorTriple s = phi_from_EB(radial);
    CHECK(s.phi_0 == complexd(1.0, 0.0));
    CHECK(std::abs(s.phi_p) == 0.0);
    CHECK(std::abs(s.phi_m) == 0.0);

    std::mt19937 rng(99u);
    for (int k = 0; k < 1000; ++k) {
        const EBComponents eb = random_eb(rng);
        const SpinorTriple t = phi_from_EB(eb);
        CHECK(t.energy_density() ==
              Catch::Approx(2.0 * (eb.e_squared() + eb.b_squared())).margin(1e-12));
    }
}

TEST_CASE("EB from phi and round trips") {
    SpinorTriple b_radial;
    b_radial.phi_0 = complexd(0.0, 1.0);
    const EBComponents eb = EB_from_phi(b_radial);
    CHECK(eb.B_r == Catch::Approx(1.0));
    CHECK(eb.E_r == 0.0);
    CHECK(eb.E_theta == 0.0);
    CHECK(eb.B_phi == 0.0);

    SpinorTriple tang;
    tang.phi_p = 1.0;
    tang.phi_m = 1.0;
    const EBComponents eb2 = EB_from_phi(tang);
    CHECK(eb2.E_theta == Catch::Approx(1.0));
    CHECK(eb2.B_phi == 0.0);
    CHECK(eb2.E_phi == 0.0);
    CHECK(eb2.B_theta == 0.0);

    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 1000; ++k) {
        const EBComponents in = random_eb(rng);
        const EBComponents back = EB_from_phi(phi_from_EB(in));
        CHECK(std::abs(back.E_r - in.E_r) < 1e-12);
        CHECK(std::abs(back.E_theta - in.E_theta) < 1e-12);
        CHECK(std::abs(back.E_phi - in.E_phi) < 1e-12);
        CHECK(std::abs(back.B_r - in.B_r) < 1e-12);
        CHECK(std::abs(back.B_theta - in.B_theta) < 1e-12);
        CHECK(std::abs(back.B_phi - in.B_phi) < 1e-12);

        SpinorTriple s;
        s.phi_p = complexd(u(rng), u(rng));
        s.phi_0 = complexd(u(rng), u(rng));
        s.phi_m = complexd(u(rng), u(rng));
        const double r = 2.5 + 40.0 * std::abs(u(rng));
        const SpinorTriple s2 = small_from_capital(capital_from_small(s, r, M1), r, M1);
        CHECK(std::abs(s2.phi_p - s.phi_p) < 1e-12);
        CHECK(std::abs(s2.phi_0 - s.phi_0) < 1e-12);
        CHECK(std::abs(s2.phi_m - s.phi_m) < 1e-12);
    }
}

TEST_CASE("coordinate-basis weights") {
    SpinorTriple s;
    s.phi_0 = 1.0;
    CHECK(capital_from_small(s, 3.0, M1).Phi_0.real() == Catch::Approx(9.0));

    const CoordinateTriple z = capital_from_small(SpinorTriple{}, 5.0, M1);
    CHECK(std::abs(z.Phi_p) == 0.0);
    CHECK(std::abs(z.Phi_0) == 0.0);
    CHECK(std::abs(z.Phi_m) == 0.0);

    SpinorTriple fixed_p;
    fixed_p.phi_p = 1.0;
    CHECK(std::abs(capital_from_small(fixed_p, 2.0 + 1e-12, M1).Phi_p) < 1e-5);

    CHECK_THROWS_AS(capital_from_small(s, 1.9, M1), std::domain_error);
}

TEST_CASE("null stress components") {
    SpinorTriple s;
    s.phi_p = 1.0;
    NullStress t = null_stress_components(s);
    CHECK(t.T_ll == 1.0);
    CHECK(t.T_ln == 0.0);
    CHECK(t.T_nn == 0.0);

    CHECK(null_stress_components(SpinorTriple{}).T_ll == 0.0);

    SpinorTriple s2;
    s2.phi_0 = complexd(3.0, 4.0);
    CHECK(null_stress_components(s2).T_ln == Catch::Approx(25.0));

    std::mt19937 rng(5u);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 200; ++k) {
        SpinorTriple r;
        r.phi_p = complexd(u(rng), u(rng));
        r.phi_0 = complexd(u(rng), u(rng));
        r.phi_m = complexd(u(rng), u(rng));
        const NullStress ns = null_stress_components(r);
        CHECK(ns.T_ll >= 0.0);
        CHECK(ns.T_ln >= 0.0);
        CHECK(ns.T_nn >= 0.0);
    }
}

TEST_CASE("static charge solution") {
    // near the horizon phi_0 stays at q_E/4M^2
    const SpinorTriple s = static_solution(StaticCharge{1.0, 0.0}, -60.0, M1);
    CHECK(s.phi_0.real() == Catch::Approx(0.25).epsilon(1e-8));
    CHECK(std::abs(s.phi_p) == 0.0);
    CHECK(std::abs(s.phi_m) == 0.0);

    const SpinorTriple z = static_solution(StaticCharge{0.0, 0.0}, 3.0, M1);
    CHECK(std::abs(z.phi_0) == 0.0);

    const SpinorTriple sb = static_solution(StaticCharge{0.0, 2.0}, 0.0, M1);
    CHECK(sb.phi_0.imag() == Catch::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("pointwise reconstruction") {
    CHECK(std::abs(reconstruct_point({}, 1.0, 2.0, 5.0, M1).phi_0) == 0.0);

    // single (1,0) mode with a = 1: phi_0 = sqrt(3/4pi) cos(theta) / r^2
    ModeAmplitude ma;
    ma.mode = make_harmonic(1, 0);
    ma.a = 1.0;
    const double th = 0.8, ph = 2.1, r = 6.0;
    const SpinorTriple s = reconstruct_point({ma}, th, ph, r, M1);
    CHECK(s.phi_0.real() ==
          Catch::Approx(std::sqrt(3.0 / (4.0 * M_PI)) * std::cos(th) / (r * r)).epsilon(1e-12));

    // linearity: two modes equal the sum of singles
    ModeAmplitude mb;
    mb.mode = make_harmonic(2, 1);
    mb.a = complexd(0.3, -0.4);
    mb.b = complexd(1.0, 0.2);
    mb.c = complexd(-0.7, 0.5);
    const SpinorTriple both = reconstruct_point({ma, mb}, th, ph, r, M1);
    const SpinorTriple one = reconstruct_point({ma}, th, ph, r, M1);
    const SpinorTriple two = reconstruct_point({mb}, th, ph, r, M1);
    CHECK(std::abs(both.phi_0 - one.phi_0 - two.phi_0) < 1e-14);
    CHECK(std::abs(both.phi_p - one.phi_p - two.phi_p) < 1e-14);
    CHECK(std::abs(both.phi_m - one.phi_m - two.phi_m) < 1e-14);
}

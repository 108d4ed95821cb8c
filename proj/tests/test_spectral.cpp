#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bhmax/spectral.hpp"

using namespace bhmax;

TEST_CASE("harmonic index invariants") {
    double prev = -1.0;
    for (int l = 0; l <= 32; ++l) {
        const HarmonicIndex h = make_harmonic(l, 0);
        CHECK(h.lambda * h.lambda == Catch::Approx(l * (l + 1.0)).epsilon(4e-16));
        CHECK(h.lambda > prev);
        prev = h.lambda;
    }
    CHECK(make_harmonic(0, 0).lambda == 0.0);
    CHECK_THROWS_AS(make_harmonic(1, 2), config_error);
    CHECK_THROWS_AS(make_harmonic(-1, 0), config_error);
}

TEST_CASE("ladder coefficient product is l(l+1)") {
    for (int l = 0; l <= 32; ++l) {
        const LadderCoefficients c = ladder_coefficients(l);
        CHECK(c.c_up * c.c_down == Catch::Approx(l * (l + 1.0)).margin(1e-12));
        CHECK(c.c_up == c.c_down); // symmetric split
    }
    CHECK(ladder_coefficients(0).c_up == 0.0);
    CHECK(ladder_coefficients(0).c_down == 0.0);
}

TEST_CASE("transport composition reproduces the wave equation") {
    for (int l : {0, 1, 5}) {
        const ConsistencyReport rep = consistency_check(l);
        CHECK(rep.consistent);
        CHECK(rep.product == Catch::Approx(l * (l + 1.0)).margin(1e-12));
    }
    CHECK(consistency_check(1).product == Catch::Approx(2.0));
    CHECK(consistency_check(5).product == Catch::Approx(30.0));
}

TEST_CASE("explicit harmonics: l=1 sanity") {
    // Y_10 = sqrt(3/4pi) cos(theta)
    const double th = 1.1, ph = 0.7;
    CHECK(zero_weight_basis(1, 0, th, ph).real() ==
          Catch::Approx(std::sqrt(3.0 / (4.0 * M_PI)) * std::cos(th)).epsilon(1e-12));
    CHECK(zero_weight_basis(1, 0, th, ph).imag() == Catch::Approx(0.0).margin(1e-14));
    // Y_00 = 1/sqrt(4pi)
    CHECK(zero_weight_basis(0, 0, th, ph).real() ==
          Catch::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("angular oracle fixes the ladder signs") {
    // l=0: every operator annihilates the constant
    CHECK(angular_oracle_residual(0, 0, 16, 16) < 1e-10);

    // spec example: l=2, m=1 on the full 64x64 grid
    CHECK(angular_oracle_residual(2, 1, 64, 64) < 1e-10);

    for (int l = 0; l <= 3; ++l)
        for (int m = -l; m <= l; ++m)
            CHECK(angular_oracle_residual(l, m, 24, 24) < 1e-10);

    CHECK_THROWS_AS(angular_oracle_residual(4, 0), config_error);
}

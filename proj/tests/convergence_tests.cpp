#include <catch2/catch_amalgamated.hpp>
#include "bhmax/run.hpp"
TEST_CASE("placeholder convergence") { CHECK(true); }

#include <catch2/catch_amalgamated.hpp>
#include "bhmax/energetics.hpp"
TEST_CASE("placeholder energetics") { CHECK(true); }

#pragma once

#include <stdexcept>
#include <string>

namespace bhmax {

// Invalid run setup: bad grid bounds, CFL violation, data touching the
// boundary, unknown config keys, ...  Maps to CLI exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerical failure: NaN during stepping, non-convergent root
// solve, I/O failure while writing series.  Maps to CLI exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bhmax

#pragma once

#include <stdexcept>

namespace nslit {

/// Invalid user-supplied configuration or input data.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that cannot produce a meaningful result for valid input
/// (degenerate transmission, no fringes, boundary contamination, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nslit

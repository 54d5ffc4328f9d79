#pragma once

#include <stdexcept>
#include <string>

namespace pdg {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration value (bad hyperparameter, malformed config file).
struct ConfigError : Error {
    using Error::Error;
};

// Problem with input data (missing file, malformed CSV, degenerate instance).
struct DataError : Error {
    using Error::Error;
};

// Incompatible tensor shapes.
struct DimensionError : Error {
    using Error::Error;
};

// Numerical failure (singular system, non-finite result, out-of-range step).
struct NumericError : Error {
    using Error::Error;
};

} // namespace pdg

#pragma once

#include <stdexcept>
#include <string>

namespace gbfi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The variance function must be strictly increasing with positive derivative.
struct NonMonotoneVariance : Error {
    using Error::Error;
};

// A sample path was evaluated against a different time grid than it was built on.
struct GridMismatch : Error {
    using Error::Error;
};

// A quadrature or validation produced a NaN/Inf.
struct NonFinite : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

// Malformed or inconsistent experiment configuration (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace gbfi

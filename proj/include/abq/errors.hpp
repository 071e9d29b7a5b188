#pragma once

#include <stdexcept>
#include <string>

namespace abq {

// Each error class maps onto one CLI exit code (see tools/abq_main.cpp).

/// Invalid parameters, malformed configuration, or violated preconditions.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Norm drift, boundary leakage or solver residual beyond tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scenario's physical preconditions do not hold (e.g. packets overlap
/// when they should be disjoint).
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace abq

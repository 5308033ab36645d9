#pragma once

#include <stdexcept>
#include <string>

namespace holefield {

/// Invalid user-facing configuration: unknown preset, bad parameter range, malformed run spec.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its tolerance. Carries whatever it had.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double partial_value, double error_estimate)
        : std::runtime_error(what), partial_value_(partial_value), error_estimate_(error_estimate) {}

    double partial_value() const noexcept { return partial_value_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_value_;
    double error_estimate_;
};

/// Geometric precondition violated (circles do not overlap, coincident centers, ...).
class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace holefield

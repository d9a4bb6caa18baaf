#pragma once

#include <stdexcept>
#include <string>

namespace lieexp {

/// Raised for inputs outside the supported configuration space
/// (gcd(d,e) != 1, no admissible ideal polynomial, ...). The CLI maps it to exit 2.
class UnsupportedConfig : public std::invalid_argument {
public:
    explicit UnsupportedConfig(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a construction invariant fails. Maps to exit 1.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

/// Precondition violations on arguments (zero inverse, foreign field, ...).
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Iterative eigensolver ran out of restarts.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

}  // namespace lieexp

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chreduct {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different algebras or have the wrong length.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the domain an operation accepts
/// (different fibers, off a level set, degenerate orbit, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Gradient or Jacobian evaluation produced non-finite values.
class GradientError : public Error {
public:
    using Error::Error;
};

/// A map that must preserve fibers moved the base point.
class FiberError : public Error {
public:
    using Error::Error;
};

/// A control value left its control subset.
class ControlError : public Error {
public:
    using Error::Error;
};

/// Raised by the RK4 driver when the state stops being finite.
class IntegrationError : public Error {
public:
    IntegrationError(std::size_t step, const std::string& what);

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Controlled matching conditions are violated (mismatch is not vertical).
class MatchingViolation : public Error {
public:
    MatchingViolation(double horizontal_residual, const std::string& what);

    double horizontal_residual() const noexcept { return horizontal_; }

private:
    double horizontal_;
};

/// Invalid parameters or malformed configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Lookup of an unknown registry name.
class UnknownNameError : public Error {
public:
    using Error::Error;
};

}  // namespace chreduct

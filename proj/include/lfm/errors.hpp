#pragma once

#include <stdexcept>
#include <string>

namespace lfm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Short machine-readable tag, stable across releases.
    virtual const char* kind() const noexcept = 0;
};

class ShapeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "shape"; }
};

/// Elimination met a pivot below the scale-relative singularity threshold.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, double pivot)
        : Error(what), pivot_(pivot) {}
    const char* kind() const noexcept override { return "singular"; }
    double pivot() const noexcept { return pivot_; }

private:
    double pivot_;
};

/// The associated matrix of a map is singular, so the map is not one-to-one.
class DegenerateMapError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degenerate"; }
};

/// A denominator <z, C> + D vanished, or the map has a pole on the closed ball.
class PoleError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "pole"; }
};

/// Caller broke a documented precondition (wrong dimension, C != 0 in the linear test, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "contract"; }
};

} // namespace lfm

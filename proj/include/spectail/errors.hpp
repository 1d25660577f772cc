#pragma once

#include <stdexcept>
#include <string>

namespace spectail {

// Every library failure derives from Error so callers can map categories to
// exit codes (see cli.hpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed configuration objects.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Arguments outside an operation's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input violates a structural precondition (asymmetric matrix, non-unit vector, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The requested ψ_α norm does not exist: E exp(|ξ|^α/K^α) diverges for every K.
class NotPsiAlphaError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// Problem size exceeds what a dense routine is configured to handle.
class CapacityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A theorem-backed check failed. Signals an implementation bug, not noise.
class VerificationError : public Error {
public:
    using Error::Error;
};

/// Too few usable points to fit constants from a tail curve.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Iterative solver hit its iteration cap; carries the best estimate so far.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_value, double residual, int iterations)
        : Error(what), best_value_(best_value), residual_(residual), iterations_(iterations) {}

    double best_value() const noexcept { return best_value_; }
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double best_value_;
    double residual_;
    int iterations_;
};

}  // namespace spectail

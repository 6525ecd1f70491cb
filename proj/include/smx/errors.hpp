#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace smx {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error {
public:
    using Error::Error;
};

class InvalidExponentError : public Error {
public:
    using Error::Error;
};

class GridMismatchError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// A structural assumption on the data (K >= 0, h > 0, p > 1) does not hold.
class AssumptionViolationError : public Error {
public:
    using Error::Error;
};

/// Conjugate gradients did not reach the requested tolerance.
class SolverFailureError : public Error {
public:
    SolverFailureError(const std::string& what, std::vector<double> residual_history)
        : Error(what), history_(std::move(residual_history)) {}

    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

class EstimationFailureError : public Error {
public:
    using Error::Error;
};

class OutsideBallError : public Error {
public:
    using Error::Error;
};

class InitializationFailureError : public Error {
public:
    using Error::Error;
};

/// ||h||_{L^3} exceeds the admissible bound m.
class ForcingTooLargeError : public Error {
public:
    ForcingTooLargeError(const std::string& what, double forcing_norm, double bound)
        : Error(what), forcing_norm_(forcing_norm), bound_(bound) {}

    double forcing_norm() const noexcept { return forcing_norm_; }
    double bound() const noexcept { return bound_; }

private:
    double forcing_norm_;
    double bound_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace smx

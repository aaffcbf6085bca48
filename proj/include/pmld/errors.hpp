#pragma once

#include <stdexcept>
#include <string>

namespace pmld {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A spectrum that is empty, nonpositive, or not ascending.
class InvalidSpectrumError : public Error {
public:
    using Error::Error;
};

// Field/operator or grid shape disagreement.
class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

// A spectral multiplier undefined (non-finite) at some eigenvalue.
class SingularMultiplierError : public Error {
public:
    using Error::Error;
};

// Operation requires the sine basis (or a linear nonlinearity).
class UnsupportedBasisError : public Error {
public:
    using Error::Error;
};

// Generic precondition violation (bad parameter value, range, index).
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

// Inner fixed-point iteration failed even after time-step adaptation.
class StepFailureError : public Error {
public:
    StepFailureError(const std::string& what, double t, double dt, double residual)
        : Error(what), time(t), step(dt), last_residual(residual) {}
    double time;
    double step;
    double last_residual;
};

// No compact prefix achieves the requested tail bound.
class InfeasibleTruncationError : public Error {
public:
    using Error::Error;
};

// Too few usable data rows for a fit or extrapolation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

}  // namespace pmld

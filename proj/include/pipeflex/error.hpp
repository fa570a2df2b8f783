#pragma once

#include <stdexcept>
#include <string>

namespace pipeflex {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Too few usable samples for a fit.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A velocity profile was evaluated outside the time span it is defined on.
class OutOfHorizon : public Error {
public:
    explicit OutOfHorizon(double t)
    : Error("time " + std::to_string(t) + " is outside the velocity horizon"), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

/// Stability certificate cannot be produced for the given parameters.
class CertificateError : public Error {
public:
    enum class Kind {
        Inapplicable,        // c <= m_p + 2 m_f
        AssumptionViolation, // tension below threshold
        Infeasible           // no admissible free parameter
    };
    CertificateError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Failure inside a linear-algebra kernel (factorization, eigen solver).
class NumericError : public Error {
public:
    using Error::Error;
};

class StepFailure : public NumericError {
public:
    StepFailure(double t, double dt)
    : NumericError("singular effective matrix at t=" + std::to_string(t) +
                   " dt=" + std::to_string(dt)),
      t_(t), dt_(dt) {}
    double time() const noexcept { return t_; }
    double dt() const noexcept { return dt_; }

private:
    double t_;
    double dt_;
};

} // namespace pipeflex

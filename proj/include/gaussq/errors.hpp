#pragma once

#include <stdexcept>
#include <string>

namespace gaussq {

// Base class for every error raised by the library. Callers that only care
// about "something in gaussq failed" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// A series or iterative routine ran out of its term/iteration budget.
class IterationLimit : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

// Covariance matrix turned out not to be positive definite.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}
    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

class NotPSD : public Error {
public:
    using Error::Error;
};

class ContractionViolation : public Error {
public:
    using Error::Error;
};

class UnsupportedInput : public Error {
public:
    using Error::Error;
};

class ConstructionFailure : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class SpectrumRangeError : public Error {
public:
    using Error::Error;
};

// Fixed-point amplification was told the good amplitude is at least a_lower,
// but the prepared state says otherwise.
class AmplitudeBoundViolation : public Error {
public:
    AmplitudeBoundViolation(const std::string& what, double actual, double bound)
        : Error(what), actual_(actual), bound_(bound) {}
    double actual() const noexcept { return actual_; }
    double bound() const noexcept { return bound_; }

private:
    double actual_;
    double bound_;
};

class EstimateInconsistency : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

class UnknownFormula : public Error {
public:
    using Error::Error;
};

}  // namespace gaussq

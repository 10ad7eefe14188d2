#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace helikon {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation at (or numerically at) a zero or pole.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Caller broke a documented precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

class PlacementError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class DegeneratePeriodError : public Error {
public:
    using Error::Error;
};

class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Quadrature could not reach its tolerance; carries the best value found.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, std::complex<double> best, double err)
        : Error(what), best_estimate(best), error_estimate(err) {}

    std::complex<double> best_estimate;
    double error_estimate;
};

}  // namespace helikon

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracqm {

// Base class for every error raised by the library. Numerical failures and
// precondition violations are both reported through this hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition on a numeric argument violated (alpha <= 0, T <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class ResourceLimitError : public Error {
public:
    using Error::Error;
};

class DegenerateCurveError : public Error {
public:
    using Error::Error;
};

// Bounds, snapshots or charts that should share a grid but do not.
class AlignmentError : public Error {
public:
    using Error::Error;
};

class NotOnCurveError : public Error {
public:
    using Error::Error;
};

// A derivative stencil crossed two knots with identical staircase value.
class PlateauError : public Error {
public:
    PlateauError(std::size_t node, const std::string& what)
        : Error(what), node_(node) {}

    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

// The gamma-dimension bisection could not classify a candidate exponent
// consistently across levels. `slopes()` holds the per-level log increments.
class EstimationFailure : public Error {
public:
    EstimationFailure(double alpha, std::vector<double> slopes, const std::string& what)
        : Error(what), alpha_(alpha), slopes_(std::move(slopes)) {}

    double alpha() const noexcept { return alpha_; }
    const std::vector<double>& slopes() const noexcept { return slopes_; }

private:
    double alpha_;
    std::vector<double> slopes_;
};

class ConjugacyError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    QuadratureError(double estimate_change, const std::string& what)
        : Error(what), change_(estimate_change) {}

    // |I(h) - I(h/2)| at the point of failure.
    double estimate_change() const noexcept { return change_; }

private:
    double change_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fracqm

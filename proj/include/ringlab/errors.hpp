#pragma once

#include <stdexcept>
#include <string>

namespace ringlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected domain description (bad profile, containment failure, charge collision).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Least-squares fit missed its residual target.
class SolverAccuracyError : public Error {
public:
    SolverAccuracyError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    double achieved_residual() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Evaluation point coincides with a fundamental-solution charge.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Gradient too small for a level-set quantity to be defined.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

class TracingError : public Error {
public:
    using Error::Error;
};

/// Pair handed to the two-point function is not on a common level set.
class ConstraintError : public Error {
public:
    using Error::Error;
};

class MapFailure : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration or inadmissible parameter combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A theorem hypothesis (e.g. strict convexity) does not hold for the input.
class HypothesisViolation : public Error {
public:
    using Error::Error;
};

} // namespace ringlab

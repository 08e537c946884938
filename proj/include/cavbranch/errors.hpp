#pragma once

#include <stdexcept>
#include <string>

namespace cavbranch {

// Invalid user input (parameters, options, grids, configs). Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A computation could not deliver its contract. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class ToleranceNotReached : public NumericalError
{
public:
    ToleranceNotReached(double estimate, double error)
        : NumericalError("tolerance not reached (estimate " + std::to_string(estimate) +
                         ", error " + std::to_string(error) + ")"),
          estimate_(estimate), error_(error)
    {
    }

    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

// The slowest decaying mode is too slow for the time-domain route to close out.
class SlowConvergence : public NumericalError
{
public:
    SlowConvergence(double partial, double bound)
        : NumericalError("slow convergence (partial " + std::to_string(partial) +
                         ", remaining bound " + std::to_string(bound) + ")"),
          partial_(partial), bound_(bound)
    {
    }

    double partial() const noexcept { return partial_; }
    double bound() const noexcept { return bound_; }

private:
    double partial_;
    double bound_;
};

} // namespace cavbranch

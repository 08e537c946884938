#pragma once

#include <functional>
#include <span>

namespace cavbranch {

struct QuadratureResult
{
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

// One 21-point Gauss-Kronrod panel on [a, b] with the 10-point Gauss error estimate.
QuadratureResult gauss_kronrod21(const std::function<double(double)>& f, double a, double b);

// Globally adaptive Gauss-Kronrod integration over [breakpoints.front(), breakpoints.back()].
// The panels initially split at every breakpoint (sorted, duplicates ignored); the
// panel with the largest error is bisected until error <= max(abs_tol, rel_tol*|value|).
// Throws ToleranceNotReached carrying the best estimate when max_subdivisions runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> breakpoints, double rel_tol,
                                    double abs_tol, int max_subdivisions);

} // namespace cavbranch

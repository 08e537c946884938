#pragma once

#include "cavbranch/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cavbranch {

struct StepControl
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double min_step = 1e-14;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 50'000'000;
};

struct StepStats
{
    long accepted = 0;
    long rejected = 0;
    double last_step = 0.0;
    double next_step = 0.0; // controller proposal, ignoring clipping at t1
};

// Dormand-Prince 5(4) with local extrapolation and FSAL. State is any Eigen
// vector (real or complex); rhs(t, y) returns dy/dt. Advances from t0 to t1
// exactly, invoking observer(t, y) after each accepted step; the observer
// returns false to stop early. Returns the time reached.
template <class Vec, class Rhs, class Observer>
double dopri5(Rhs&& rhs, Vec& y, double t0, double t1, double h0, const StepControl& ctl,
              Observer&& observer, StepStats* stats = nullptr)
{
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    // 5th-order minus embedded 4th-order weights
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    StepStats local;
    StepStats& st = stats ? *stats : local;

    double t = t0;
    double h = std::min(h0, t1 - t0);
    Vec k1 = rhs(t, y);
    double previous_err = 1e-4;

    while (t < t1) {
        if (st.accepted + st.rejected >= ctl.max_steps)
            throw NumericalError("step budget exhausted");
        const bool last = t + h >= t1;
        const double unclipped = h;
        if (last)
            h = t1 - t;

        const Vec k2 = rhs(t + c2 * h, (y + h * (a21 * k1)).eval());
        const Vec k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
        const Vec k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
        const Vec k5 =
            rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
        const Vec k6 = rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5))
                                      .eval());
        const Vec y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = rhs(t + h, y_new);
        const Vec err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale =
                ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double ratio = std::abs(err_vec[i]) / scale;
            err += ratio * ratio;
        }
        err = std::sqrt(err / static_cast<double>(y.size()));

        if (err <= 1.0) {
            t = last ? t1 : t + h;
            y = y_new;
            k1 = k7;
            ++st.accepted;
            st.last_step = h;
            // PI step-size controller
            const double factor =
                err == 0.0 ? 5.0
                           : 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(previous_err, 0.4 / 5.0);
            previous_err = std::max(err, 1e-4);
            if (!observer(t, y))
                return t;
            h = std::min(ctl.max_step, h * std::clamp(factor, 0.2, 5.0));
            st.next_step = last ? std::max(h, unclipped) : h;
        }
        else {
            ++st.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
        }
        if (t < t1 && h < ctl.min_step * std::max(1.0, std::abs(t)))
            throw NumericalError("step underflow");
    }
    return t;
}

} // namespace cavbranch

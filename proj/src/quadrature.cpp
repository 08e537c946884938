#include "cavbranch/quadrature.hpp"
#include "cavbranch/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace cavbranch {

namespace {

// Kronrod abscissae (descending, last is the centre); odd indices are the Gauss nodes.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745755208, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
};

constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel
{
    double a;
    double b;
    QuadratureResult r;

    bool operator<(const Panel& other) const { return r.error < other.r.error; }
};

} // namespace

QuadratureResult gauss_kronrod21(const std::function<double(double)>& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_centre = f(centre);
    double kronrod = f_centre * kKronrodWeights[10];
    double gauss = 0.0;
    double abs_sum = std::abs(kronrod);
    std::array<double, 10> f_left{}, f_right{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kNodes[j];
        f_left[j] = f(centre - dx);
        f_right[j] = f(centre + dx);
        const double pair = f_left[j] + f_right[j];
        kronrod += kKronrodWeights[j] * pair;
        abs_sum += kKronrodWeights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
        if (j % 2 == 1)
            gauss += kGaussWeights[j / 2] * pair;
    }

    // QUADPACK-style error estimate.
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[10] * std::abs(f_centre - mean);
    for (int j = 0; j < 10; ++j)
        asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));

    const double width = std::abs(half);
    double error = std::abs((kronrod - gauss) * half);
    asc *= width;
    abs_sum *= width;
    if (asc != 0.0 && error != 0.0)
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * kEps))
        error = std::max(50.0 * kEps * abs_sum, error);

    return {kronrod * half, error, 1};
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> breakpoints, double rel_tol,
                                    double abs_tol, int max_subdivisions)
{
    std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() < 2)
        return {};

    std::priority_queue<Panel> open;
    std::vector<Panel> closed; // panels too narrow to bisect further
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel panel{cuts[i], cuts[i + 1], gauss_kronrod21(f, cuts[i], cuts[i + 1])};
        value += panel.r.value;
        error += panel.r.error;
        open.push(panel);
    }
    int panels = static_cast<int>(cuts.size()) - 1;

    auto converged = [&] { return error <= std::max(abs_tol, rel_tol * std::abs(value)); };

    while (!converged() && !open.empty()) {
        if (panels >= max_subdivisions)
            break;
        Panel worst = open.top();
        open.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 16.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            closed.push_back(worst);
            continue;
        }
        Panel left{worst.a, mid, gauss_kronrod21(f, worst.a, mid)};
        Panel right{mid, worst.b, gauss_kronrod21(f, mid, worst.b)};
        value += left.r.value + right.r.value - worst.r.value;
        error += left.r.error + right.r.error - worst.r.error;
        open.push(left);
        open.push(right);
        ++panels;
    }

    // Re-sum from the panels to shed the drift of the running totals.
    std::vector<Panel> all = std::move(closed);
    while (!open.empty()) {
        all.push_back(open.top());
        open.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    value = 0.0;
    error = 0.0;
    for (const auto& p : all) {
        value += p.r.value;
        error += p.r.error;
    }

    if (!converged())
        throw ToleranceNotReached(value, error);
    return {value, error, panels};
}

} // namespace cavbranch

#pragma once

#include <optional>
#include <string_view>

namespace cavbranch {

enum class Route { quadrature, residue, time_domain };

constexpr std::string_view to_string(Route r)
{
    switch (r) {
    case Route::quadrature:
        return "quadrature";
    case Route::residue:
        return "residue";
    case Route::time_domain:
        return "time_domain";
    }
    return "?";
}

std::optional<Route> parse_route(std::string_view name);

// Asymptotic populations of the two final states and their ratio.
struct BranchingResult
{
    double p_b = 0.0;
    double p_c = 0.0;
    double ratio = 0.0; // p_b / p_c
    double err_b = 0.0;
    double err_c = 0.0;
    double err_ratio = 0.0; // first-order propagation of err_b, err_c
    Route route = Route::quadrature;
};

// Forms the ratio. Throws NumericalError("ratio undefined") when p_c is
// indistinguishable from zero (p_c <= 10 err_c).
BranchingResult make_branching(double p_b, double err_b, double p_c, double err_c, Route route);

} // namespace cavbranch

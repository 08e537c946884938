#include "cavbranch/branching.hpp"
#include "cavbranch/errors.hpp"

#include <cmath>

namespace cavbranch {

std::optional<Route> parse_route(std::string_view name)
{
    if (name == "quadrature")
        return Route::quadrature;
    if (name == "residue")
        return Route::residue;
    if (name == "time_domain" || name == "time-domain")
        return Route::time_domain;
    return std::nullopt;
}

BranchingResult make_branching(double p_b, double err_b, double p_c, double err_c, Route route)
{
    if (!(p_c > 10.0 * err_c) || p_c == 0.0)
        throw NumericalError("ratio undefined");
    BranchingResult r;
    r.p_b = p_b;
    r.p_c = p_c;
    r.err_b = err_b;
    r.err_c = err_c;
    r.ratio = p_b / p_c;
    const double rel_b = p_b != 0.0 ? err_b / p_b : 0.0;
    const double rel_c = err_c / p_c;
    r.err_ratio = std::abs(r.ratio) * std::hypot(rel_b, rel_c);
    r.route = route;
    return r;
}

} // namespace cavbranch

#pragma once

#include "cavbranch/branching.hpp"
#include "cavbranch/model.hpp"
#include "cavbranch/params.hpp"

namespace cavbranch {

struct QuadratureOptions
{
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    bool pole_breakpoints = true;

    void validate() const;
};

struct PopulationEstimate
{
    double probability = 0.0;
    double error = 0.0;
};

// Final population of channel i for an initially excited emitter:
//   P_i = k g_i * Integral dw (k/pi)/(k^2 + w^2) |alpha(-i(w - d_i))|^2
// integrated over the whole real line after the map w = s tan(theta).
PopulationEstimate population(Channel channel, const SystemParams& params,
                              const QuadratureOptions& opts = {});

// Same integral with a caller-supplied resolvent in place of model::resolvent.
PopulationEstimate population_using(Channel channel, const SystemParams& params,
                                    const QuadratureOptions& opts, const ResolventFn& resolvent_fn);

BranchingResult branching_ratio(const SystemParams& params, const QuadratureOptions& opts = {});

// Closed-form value of the population integral from the partial-fraction
// expansion of the resolvent over its poles. Throws NumericalError with
// "degenerate poles" (use quadrature instead) or "cancellation loss".
double population_residue_oracle(Channel channel, const SystemParams& params);

BranchingResult branching_ratio_residue(const SystemParams& params);

} // namespace cavbranch

#pragma once

#include "cavbranch/branching.hpp"
#include "cavbranch/params.hpp"
#include "cavbranch/spectral.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace cavbranch {

// Amplitudes of the single-excitation sector with each Lorentzian reservoir
// represented by one damped pseudo-mode.
struct AmplitudeState
{
    cplx alpha{1.0, 0.0}; // excited state |a,0>
    cplx u{};             // drive partner |f,0> in the rotating frame, |u| = |beta|
    cplx v_b{};           // pseudo-mode feeding channel b
    cplx v_c{};           // pseudo-mode feeding channel c

    double norm() const
    {
        return std::norm(alpha) + std::norm(u) + std::norm(v_b) + std::norm(v_c);
    }
};

struct TrajectorySample
{
    double t = 0.0;
    AmplitudeState state;
    double rho_b = 0.0; // population delivered to |b> up to t
    double rho_c = 0.0;

    double balance() const { return state.norm() + rho_b + rho_c; }
};

struct Trajectory
{
    std::vector<TrajectorySample> samples;
};

using GeneratorMatrix = Eigen::Matrix<cplx, 4, 4>;

// d/dt (alpha, u, v_b, v_c) = M (alpha, u, v_b, v_c) with
//   alpha' = -i G u - i g_b v_b - i g_c v_c
//   u'     = -i Delta u - i G alpha
//   v_i'   = -(k - i d_i) v_i - i g_i alpha,      g_i = sqrt(k gamma_i)
GeneratorMatrix generator_matrix(const SystemParams& params);

// Eigenvalues of the generator, sorted by decreasing real part.
std::array<cplx, 4> generator_eigenvalues(const SystemParams& params);

struct StepOptions
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // 0 records every accepted step; otherwise this many uniformly spaced samples on [0, t_max].
    int samples = 0;
    // Population runs stop once the remaining norm falls below this.
    double norm_cutoff = 1e-9;
    // Upper bound on the integration horizon, in units of 1/kappa.
    double max_time = 200.0;
    // Decay rates below rate_floor * kappa count as non-decaying.
    double rate_floor = 1e-12;
    long max_steps = 50'000'000;

    void validate() const;
};

// Integrates from (1, 0, 0, 0) to t_max with an adaptive Dormand-Prince 5(4)
// scheme; rho_b, rho_c are integrated alongside the amplitudes.
Trajectory evolve(const SystemParams& params, double t_max, const StepOptions& opts = {});

// 20 / |Re| of the slowest mode that the initial state actually excites, capped at
// opts.max_time / kappa.
double auto_time_horizon(const SystemParams& params, const StepOptions& opts = {});

// Flux 2k * Integral |v_i(t)|^2 dt from the time-domain route. The integration runs
// until the norm drops below the cutoff or the horizon is reached; whatever norm is
// left is carried to t = infinity exactly through the controllability Gramian of
// the remaining state.
PopulationEstimate population_time_domain(Channel channel, const SystemParams& params,
                                          const StepOptions& opts = {});

struct ChannelPopulations
{
    PopulationEstimate b;
    PopulationEstimate c;
};

// Both channels from a single trajectory.
ChannelPopulations populations_time_domain(const SystemParams& params,
                                           const StepOptions& opts = {});

BranchingResult branching_time_domain(const SystemParams& params, const StepOptions& opts = {});

} // namespace cavbranch

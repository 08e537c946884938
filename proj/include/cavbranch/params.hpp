#pragma once

#include <complex>
#include <string_view>

namespace cavbranch {

using cplx = std::complex<double>;

// One emitter + cavity configuration. All frequencies and rates share one unit
// (usually kappa = 1). Only detunings are stored; absolute transition and
// cavity frequencies never enter the dynamics.
struct SystemParams
{
    double gamma_b = 0.0;        // decay rate a -> b in a resonant cavity
    double gamma_c = 0.0;        // decay rate a -> c
    double delta_b = 0.0;        // omega_ab - omega_cavity
    double delta_c = 0.0;        // omega_ac - omega_cavity
    double drive_g = 0.0;        // drive coupling (Rabi frequency is 2 G), >= 0
    double drive_detuning = 0.0; // omega_laser - omega_af
    double kappa = 1.0;          // cavity half-width, > 0

    bool operator==(const SystemParams&) const = default;
};

enum class Channel { b, c };

constexpr std::string_view to_string(Channel ch) { return ch == Channel::b ? "b" : "c"; }

// Throws ValidationError naming the first violated invariant; returns params unchanged.
const SystemParams& validate(const SystemParams& params);

// validate() plus the requirement that at least one decay channel exists.
const SystemParams& validate_decaying(const SystemParams& params);

inline double channel_gamma(const SystemParams& p, Channel ch)
{
    return ch == Channel::b ? p.gamma_b : p.gamma_c;
}

inline double channel_detuning(const SystemParams& p, Channel ch)
{
    return ch == Channel::b ? p.delta_b : p.delta_c;
}

// Cavity coupling g_i, from the Purcell identification gamma_i = |g_i|^2 / kappa.
double channel_coupling(const SystemParams& p, Channel ch);

// Largest frequency scale in the problem; never below kappa.
double frequency_scale(const SystemParams& p);

} // namespace cavbranch

#include "cavbranch/spectral.hpp"
#include "cavbranch/errors.hpp"
#include "cavbranch/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace cavbranch {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Breakpoints in the compactified variable theta, where w = scale * tan(theta).
std::vector<double> theta_breakpoints(Channel channel, const SystemParams& p, double scale,
                                      bool use_poles)
{
    const double detuning = channel_detuning(p, channel);
    std::vector<double> omegas = {0.0, -p.kappa, p.kappa, detuning};
    if (p.drive_g > 0.0)
        omegas.push_back(detuning + p.drive_detuning); // zero of alpha on the real line

    if (use_poles) {
        // The integrand peaks at w = d_i - Im(z_k) with half-width |Re(z_k)|; seed
        // geometric rings around each peak so narrow dressed resonances get resolved.
        for (const auto& pole : find_poles(p).poles) {
            const double centre = detuning - pole.root.imag();
            const double width = std::abs(pole.root.real());
            omegas.push_back(centre);
            if (!(width > 0.0))
                continue;
            for (double ring = width; ring < 10.0 * scale; ring *= 4.0) {
                omegas.push_back(centre - ring);
                omegas.push_back(centre + ring);
            }
        }
    }

    std::vector<double> thetas = {-kPi / 2.0, kPi / 2.0};
    for (double w : omegas)
        thetas.push_back(std::atan(w / scale));
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
    return thetas;
}

} // namespace

void QuadratureOptions::validate() const
{
    if (!(rel_tol > 0.0))
        throw ValidationError("quadrature rel_tol must be > 0");
    if (!(abs_tol > 0.0))
        throw ValidationError("quadrature abs_tol must be > 0");
    if (max_subdivisions < 16)
        throw ValidationError("quadrature max_subdivisions must be ≥ 16");
}

PopulationEstimate population_using(Channel channel, const SystemParams& params,
                                    const QuadratureOptions& opts, const ResolventFn& resolvent_fn)
{
    const auto& p = validate(params);
    opts.validate();
    const double gamma = channel_gamma(p, channel);
    if (gamma == 0.0)
        return {};

    const double kappa = p.kappa;
    const double detuning = channel_detuning(p, channel);
    const double prefactor = kappa * gamma * kappa / kPi;
    const double scale = frequency_scale(p);

    auto integrand = [&](double theta) {
        const double t = std::tan(theta);
        const double omega = scale * t;
        const double jacobian = scale * (1.0 + t * t);
        cplx amplitude;
        try {
            amplitude = resolvent_fn(-I * (omega - detuning), p);
        }
        catch (const NumericalError&) {
            // The only reachable case on the real line is the drive self-energy
            // pole, where the amplitude vanishes.
            amplitude = 0.0;
        }
        const double value = prefactor * std::norm(amplitude) / (kappa * kappa + omega * omega);
        return std::isfinite(value) ? value * jacobian : 0.0;
    };

    const auto cuts = theta_breakpoints(channel, p, scale, opts.pole_breakpoints);
    const auto r = integrate_adaptive(integrand, cuts, opts.rel_tol, opts.abs_tol,
                                      opts.max_subdivisions);
    if (!std::isfinite(r.value))
        throw NumericalError("divergent integrand");
    return {r.value, r.error};
}

PopulationEstimate population(Channel channel, const SystemParams& params,
                              const QuadratureOptions& opts)
{
    return population_using(channel, params, opts,
                            [](cplx z, const SystemParams& p) { return resolvent(z, p); });
}

BranchingResult branching_ratio(const SystemParams& params, const QuadratureOptions& opts)
{
    validate_decaying(params);
    const auto b = population(Channel::b, params, opts);
    const auto c = population(Channel::c, params, opts);
    return make_branching(b.probability, b.error, c.probability, c.error, Route::quadrature);
}

double population_residue_oracle(Channel channel, const SystemParams& params)
{
    const auto& p = validate(params);
    const double gamma = channel_gamma(p, channel);
    if (gamma == 0.0)
        return 0.0;

    const PoleSet poles = find_poles(p);
    if (poles.degenerate)
        throw NumericalError("degenerate poles");

    // alpha(-i(w - d)) = sum_k r_k * i / (w - w_k) with w_k = d + i z_k (lower half plane).
    const double kappa = p.kappa;
    const double detuning = channel_detuning(p, channel);
    double largest = 0.0;
    for (const auto& pole : poles.poles)
        largest = std::max(largest, std::abs(pole.residue));

    struct Term
    {
        cplx residue;
        cplx w;
    };
    std::vector<Term> terms;
    for (const auto& pole : poles.poles) {
        // Roots of cancelled factors carry roundoff-level residues.
        if (std::abs(pole.residue) <= 1e-13 * largest)
            continue;
        terms.push_back({pole.residue, detuning + I * pole.root});
    }

    // Integral of L(w) / ((w - w_j)(w - conj w_k)) closed in the upper half plane,
    // picking up the Lorentzian pole at i k and the pole at conj w_k.
    const cplx ik = I * kappa;
    cplx total{};
    double magnitude = 0.0;
    for (const auto& j : terms) {
        for (const auto& k : terms) {
            const cplx wk_bar = std::conj(k.w);
            const cplx integral = 1.0 / ((ik - j.w) * (ik - wk_bar)) +
                                  2.0 * ik / ((wk_bar * wk_bar + kappa * kappa) * (wk_bar - j.w));
            const cplx term = j.residue * std::conj(k.residue) * integral;
            total += term;
            magnitude += std::abs(term);
        }
    }
    total *= kappa * gamma;
    magnitude *= kappa * gamma;

    if (!std::isfinite(total.real()) || magnitude > 1e6 * std::abs(total.real()))
        throw NumericalError("cancellation loss");
    return total.real();
}

BranchingResult branching_ratio_residue(const SystemParams& params)
{
    validate_decaying(params);
    const double b = population_residue_oracle(Channel::b, params);
    const double c = population_residue_oracle(Channel::c, params);
    // Exact up to roundoff in the pole locations.
    constexpr double kErr = 1e-12;
    return make_branching(b, b != 0.0 ? kErr : 0.0, c, c != 0.0 ? kErr : 0.0, Route::residue);
}

} // namespace cavbranch

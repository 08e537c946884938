#include "cavbranch/dynamics.hpp"
#include "cavbranch/errors.hpp"
#include "cavbranch/ode.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cavbranch {

namespace {

constexpr cplx I{0.0, 1.0};

// amplitudes followed by (rho_b, rho_c) stored in the real parts
using Augmented = Eigen::Matrix<cplx, 6, 1>;

enum Component { kAlpha = 0, kU = 1, kVb = 2, kVc = 3 };

// Components the initial state can ever populate: a zero coupling leaves its
// partner amplitude identically zero, along with a spurious non-decaying mode.
std::vector<int> active_components(const SystemParams& p)
{
    std::vector<int> active = {kAlpha};
    if (p.drive_g > 0.0)
        active.push_back(kU);
    if (p.gamma_b > 0.0)
        active.push_back(kVb);
    if (p.gamma_c > 0.0)
        active.push_back(kVc);
    return active;
}

Eigen::MatrixXcd restrict_to(const GeneratorMatrix& m, const std::vector<int>& idx)
{
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = m(idx[i], idx[j]);
    return out;
}

double slowest_rate(const SystemParams& p)
{
    const auto block = restrict_to(generator_matrix(p), active_components(p));
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(block, false);
    double slowest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        slowest = std::min(slowest, std::abs(solver.eigenvalues()[i].real()));
    return slowest;
}

AmplitudeState unpack(const Augmented& y) { return {y[kAlpha], y[kU], y[kVb], y[kVc]}; }

TrajectorySample sample_of(double t, const Augmented& y)
{
    return {t, unpack(y), y[4].real(), y[5].real()};
}

struct Integration
{
    Augmented y;
    double t_end;
};

// Runs dx/dt = M x from the excited state; observer(t, y) as in dopri5.
template <class Observer>
Integration integrate(const SystemParams& p, double t_max, const StepOptions& opts,
                      const std::vector<double>& stops, Observer&& observer)
{
    const GeneratorMatrix m = generator_matrix(p);
    const double two_kappa = 2.0 * p.kappa;
    auto rhs = [&](double, const Augmented& y) {
        Augmented dy;
        dy.head<4>() = m * y.head<4>();
        dy[4] = two_kappa * std::norm(y[kVb]);
        dy[5] = two_kappa * std::norm(y[kVc]);
        return dy;
    };

    StepControl ctl;
    ctl.rel_tol = opts.rel_tol;
    ctl.abs_tol = opts.abs_tol;
    ctl.max_steps = opts.max_steps;

    Augmented y = Augmented::Zero();
    y[kAlpha] = 1.0;
    StepStats stats;
    stats.next_step = 0.01 / std::max(m.cwiseAbs().maxCoeff(), p.kappa);

    double t = 0.0;
    bool stopped = false;
    auto wrapped = [&](double tt, const Augmented& yy) {
        if (!observer(tt, yy, false)) {
            stopped = true;
            return false;
        }
        return true;
    };
    for (double stop : stops) {
        if (stop <= t)
            continue;
        t = dopri5(rhs, y, t, std::min(stop, t_max), stats.next_step, ctl, wrapped, &stats);
        if (stopped)
            break;
        observer(t, y, true);
        if (t >= t_max)
            break;
    }
    return {y, t};
}

// X = Integral_0^inf exp(A s) x x^H exp(A^H s) ds, i.e. A X + X A^H = -x x^H.
Eigen::MatrixXcd lyapunov_integral(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& x)
{
    const Eigen::Index n = a.rows();
    Eigen::MatrixXcd kron = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index row = j * n + i;
            for (Eigen::Index k = 0; k < n; ++k)
                kron(row, j * n + k) += a(i, k);
            for (Eigen::Index l = 0; l < n; ++l)
                kron(row, l * n + i) += std::conj(a(j, l));
        }
    const Eigen::MatrixXcd source = -(x * x.adjoint());
    const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(source.data(), n * n);
    const Eigen::VectorXcd sol = kron.fullPivLu().solve(rhs);
    return Eigen::Map<const Eigen::MatrixXcd>(sol.data(), n, n);
}

struct ChannelFluxes
{
    double p_b;
    double p_c;
    double error;
};

ChannelFluxes channel_fluxes(const SystemParams& params, const StepOptions& opts)
{
    const auto& p = validate_decaying(params);
    opts.validate();

    const double rate = slowest_rate(p);
    const double cap = opts.max_time / p.kappa;
    const double horizon = rate > 0.0 ? std::min(20.0 / rate, cap) : cap;

    const auto run = integrate(p, horizon, opts, {horizon},
                               [&](double, const Augmented& y, bool) {
                                   return unpack(y).norm() >= opts.norm_cutoff;
                               });

    const double rho_b = run.y[4].real();
    const double rho_c = run.y[5].real();
    const double remaining = unpack(run.y).norm();
    if (rate < opts.rate_floor * p.kappa)
        throw SlowConvergence(rho_b + rho_c, remaining);

    // Exact flux still to come from the state left at the end of the run.
    const auto active = active_components(p);
    const auto block = restrict_to(generator_matrix(p), active);
    Eigen::VectorXcd x(static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i)
        x[static_cast<Eigen::Index>(i)] = run.y[active[i]];
    const Eigen::MatrixXcd gram = lyapunov_integral(block, x);
    double tail_b = 0.0;
    double tail_c = 0.0;
    for (std::size_t i = 0; i < active.size(); ++i) {
        const double diag = gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        if (active[i] == kVb)
            tail_b = 2.0 * p.kappa * diag;
        if (active[i] == kVc)
            tail_c = 2.0 * p.kappa * diag;
    }

    const double p_b = rho_b + tail_b;
    const double p_c = rho_c + tail_c;
    const double defect = std::abs(1.0 - (remaining + rho_b + rho_c)) +
                          std::abs(remaining - (tail_b + tail_c));
    return {p_b, p_c, defect + opts.rel_tol};
}

} // namespace

void StepOptions::validate() const
{
    if (!(rel_tol > 0.0))
        throw ValidationError("step rel_tol must be > 0");
    if (!(abs_tol > 0.0))
        throw ValidationError("step abs_tol must be > 0");
    if (samples < 0 || samples == 1)
        throw ValidationError("step samples must be 0 or ≥ 2");
    if (!(norm_cutoff > 0.0))
        throw ValidationError("step norm_cutoff must be > 0");
    if (!(max_time > 0.0))
        throw ValidationError("step max_time must be > 0");
    if (max_steps < 1)
        throw ValidationError("step max_steps must be ≥ 1");
}

GeneratorMatrix generator_matrix(const SystemParams& params)
{
    const auto& p = validate(params);
    const double g_b = channel_coupling(p, Channel::b);
    const double g_c = channel_coupling(p, Channel::c);
    GeneratorMatrix m = GeneratorMatrix::Zero();
    m(kAlpha, kU) = -I * p.drive_g;
    m(kAlpha, kVb) = -I * g_b;
    m(kAlpha, kVc) = -I * g_c;
    m(kU, kU) = -I * p.drive_detuning;
    m(kU, kAlpha) = -I * p.drive_g;
    m(kVb, kVb) = -(p.kappa - I * p.delta_b);
    m(kVb, kAlpha) = -I * g_b;
    m(kVc, kVc) = -(p.kappa - I * p.delta_c);
    m(kVc, kAlpha) = -I * g_c;
    return m;
}

std::array<cplx, 4> generator_eigenvalues(const SystemParams& params)
{
    const Eigen::ComplexEigenSolver<GeneratorMatrix> solver(generator_matrix(params), false);
    std::array<cplx, 4> out;
    for (int i = 0; i < 4; ++i)
        out[i] = solver.eigenvalues()[i];
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
    return out;
}

double auto_time_horizon(const SystemParams& params, const StepOptions& opts)
{
    const auto& p = validate(params);
    const double cap = opts.max_time / p.kappa;
    const double rate = slowest_rate(p);
    return rate > opts.rate_floor * p.kappa ? std::min(20.0 / rate, cap) : cap;
}

Trajectory evolve(const SystemParams& params, double t_max, const StepOptions& opts)
{
    const auto& p = validate(params);
    opts.validate();
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw ValidationError("t_max must be > 0");

    Trajectory traj;
    Augmented initial = Augmented::Zero();
    initial[kAlpha] = 1.0;
    traj.samples.push_back(sample_of(0.0, initial));

    std::vector<double> stops;
    if (opts.samples > 0) {
        const int n = opts.samples;
        traj.samples.reserve(static_cast<std::size_t>(n));
        for (int k = 1; k < n; ++k)
            stops.push_back(k == n - 1 ? t_max : t_max * k / (n - 1));
        integrate(p, t_max, opts, stops, [&](double t, const Augmented& y, bool at_stop) {
            if (at_stop)
                traj.samples.push_back(sample_of(t, y));
            return true;
        });
    }
    else {
        stops.push_back(t_max);
        integrate(p, t_max, opts, stops, [&](double t, const Augmented& y, bool at_stop) {
            if (!at_stop)
                traj.samples.push_back(sample_of(t, y));
            return true;
        });
    }
    return traj;
}

PopulationEstimate population_time_domain(Channel channel, const SystemParams& params,
                                          const StepOptions& opts)
{
    const auto flux = channel_fluxes(params, opts);
    return {channel == Channel::b ? flux.p_b : flux.p_c, flux.error};
}

ChannelPopulations populations_time_domain(const SystemParams& params, const StepOptions& opts)
{
    const auto flux = channel_fluxes(params, opts);
    return {{flux.p_b, params.gamma_b > 0.0 ? flux.error : 0.0},
            {flux.p_c, params.gamma_c > 0.0 ? flux.error : 0.0}};
}

BranchingResult branching_time_domain(const SystemParams& params, const StepOptions& opts)
{
    const auto pops = populations_time_domain(params, opts);
    return make_branching(pops.b.probability, pops.b.error, pops.c.probability, pops.c.error,
                          Route::time_domain);
}

} // namespace cavbranch

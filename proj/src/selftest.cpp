#include "cavbranch/selftest.hpp"
#include "cavbranch/model.hpp"
#include "cavbranch/sweep.hpp"
#include "cavbranch/table_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace cavbranch {

namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

SuiteOutcome bounded(const std::string& what, double worst, double limit)
{
    return {worst < limit, what + " = " + sci(worst) + " (limit " + sci(limit) + ")"};
}

double ratio_of(const Routes& routes, const SystemParams& p)
{
    return routes.spectral(Channel::b, p).probability / routes.spectral(Channel::c, p).probability;
}

double ratio_time(const Routes& routes, const SystemParams& p)
{
    const auto pops = routes.time_domain(p);
    return pops.b.probability / pops.c.probability;
}

// Eigenvalues matched greedily to roots; returns the largest matched distance.
double multiset_distance(std::array<cplx, 4> a, std::array<cplx, 4> b)
{
    double worst = 0.0;
    std::array<bool, 4> used{};
    for (const cplx& x : a) {
        int best = -1;
        double best_d = 0.0;
        for (int j = 0; j < 4; ++j) {
            if (used[j])
                continue;
            const double d = std::abs(x - b[j]);
            if (best < 0 || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_d);
    }
    return worst;
}

SuiteOutcome symmetric_case(const Routes& routes)
{
    double worst = 0.0;
    double worst_half = 0.0;
    for (double d : {0.5, 2.0, 5.0})
        for (double g : {0.0, 0.5, 1.0, 2.0, 5.0}) {
            const SystemParams p{1.0, 1.0, d, -d, g, 0.0, 1.0};
            const double pb = routes.spectral(Channel::b, p).probability;
            const double pc = routes.spectral(Channel::c, p).probability;
            const auto td = routes.time_domain(p);
            worst = std::max({worst, std::abs(pb - pc), std::abs(td.b.probability - td.c.probability)});
            for (double v : {pb, pc, td.b.probability, td.c.probability})
                worst_half = std::max(worst_half, std::abs(v - 0.5));
        }
    SuiteOutcome out;
    out.passed = worst < 1e-6 && worst_half < 1e-6;
    out.detail = "max |P_b - P_c| = " + sci(worst) + ", max |P - 0.5| = " + sci(worst_half) + " (limit 1e-06)";
    return out;
}

SuiteOutcome markov_limit(const Routes& routes)
{
    SystemParams p{0.6, 0.3, 2.0, -2.0, 1.0, 2.0, 100.0};
    const double at_g1 = ratio_of(routes, p);
    const double deviation = std::abs(at_g1 - 2.0) / 2.0;
    double lo = at_g1;
    double hi = at_g1;
    for (double g : {0.0, 1.0, 2.0}) {
        p.drive_g = g;
        const double r = ratio_of(routes, p);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const double spread = (hi - lo) / lo;
    SuiteOutcome out;
    out.passed = deviation < 0.01 && spread < 0.01;
    out.detail = "|R - 2|/2 = " + sci(deviation) + ", spread over G = " + sci(spread) +
                 " (limit 0.01)";
    return out;
}

SuiteOutcome unitarity(const Routes& routes)
{
    std::mt19937_64 rng(20240301);
    double worst_q = 0.0;
    double worst_t = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const SystemParams p = random_physical_params(rng);
        worst_q = std::max(worst_q, std::abs(routes.spectral(Channel::b, p).probability +
                                             routes.spectral(Channel::c, p).probability - 1.0));
        const auto td = routes.time_domain(p);
        worst_t = std::max(worst_t, std::abs(td.b.probability + td.c.probability - 1.0));
    }
    SuiteOutcome out;
    out.passed = worst_q < 1e-6 && worst_t < 1e-5;
    out.detail = "max |P_b + P_c - 1| quadrature " + sci(worst_q) + " (limit 1e-06), time domain " +
                 sci(worst_t) + " (limit 1e-05)";
    return out;
}

SuiteOutcome route_equivalence(const Routes& routes)
{
    std::mt19937_64 rng(777);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const SystemParams p = random_physical_params(rng);
        const auto td = routes.time_domain(p);
        worst = std::max(worst, std::abs(routes.spectral(Channel::b, p).probability - td.b.probability));
        worst = std::max(worst, std::abs(routes.spectral(Channel::c, p).probability - td.c.probability));
    }
    return bounded("max |P_spectral - P_time|", worst, 1e-5);
}

SuiteOutcome residue_oracle(const Routes& routes)
{
    std::mt19937_64 rng(4242);
    double worst = 0.0;
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const SystemParams p = random_physical_params(rng);
        if (find_poles(p).degenerate)
            continue;
        for (Channel ch : {Channel::b, Channel::c})
            worst = std::max(worst, std::abs(routes.spectral(ch, p).probability -
                                             population_residue_oracle(ch, p)));
        ++checked;
    }
    auto out = bounded("max |P_quadrature - P_residue| over " + std::to_string(checked) + " draws",
                       worst, 1e-8);
    out.passed = out.passed && checked > 0;
    return out;
}

SuiteOutcome degenerate_detuning(const Routes& routes)
{
    std::mt19937_64 rng(99);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        SystemParams p = random_physical_params(rng);
        p.delta_c = p.delta_b;
        worst = std::max(worst, std::abs(ratio_of(routes, p) - p.gamma_b / p.gamma_c));
    }
    return bounded("max |R - gamma_b/gamma_c|", worst, 1e-9);
}

SuiteOutcome pole_consistency(const Routes&)
{
    std::mt19937_64 rng(31337);
    double max_real = -1.0;
    double worst_match = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const SystemParams p = random_physical_params(rng);
        const PoleSet poles = find_poles(p);
        std::array<cplx, 4> roots;
        for (int k = 0; k < 4; ++k) {
            roots[k] = poles.poles[k].root;
            max_real = std::max(max_real, roots[k].real());
        }
        worst_match = std::max(worst_match, multiset_distance(roots, generator_eigenvalues(p)));
    }
    SuiteOutcome out;
    out.passed = max_real <= 1e-10 && worst_match < 1e-9;
    out.detail = "max Re(root) = " + sci(max_real) + " (limit 1e-10), eigenvalue mismatch " +
                 sci(worst_match) + " (limit 1e-09)";
    return out;
}

SuiteOutcome drive_effect(const Routes& routes)
{
    SystemParams p{1.0, 1.0, 2.0, -2.0, 0.0, 2.0, 1.0};
    const double undriven = ratio_of(routes, p);
    p.drive_g = 2.0;
    const double driven = ratio_of(routes, p);
    SuiteOutcome out;
    out.passed = std::abs(undriven - 1.0) < 1e-6 && std::abs(driven - 1.0) > 0.01;
    out.detail = "R(G=0) - 1 = " + sci(undriven - 1.0) + " (limit 1e-06), R(G=2) = " + sci(driven) +
                 " (needs |R - 1| > 0.01)";
    return out;
}

SuiteOutcome fig4_symmetry(const Routes& routes)
{
    const GridSpec spec = preset_fig4();
    const std::size_t n_delta = spec.axes[1].values.size();
    double worst_centre = 0.0;
    double worst_mirror = 0.0;
    double worst_mirror_time = 0.0;
    for (std::size_t gi = 0; gi < spec.axes[0].values.size(); ++gi) {
        std::vector<double> ratios(n_delta);
        for (std::size_t k = 0; k < n_delta; ++k)
            ratios[k] = ratio_of(routes, spec.point(gi * n_delta + k));
        for (std::size_t k = 0; k < n_delta; ++k) {
            const double delta = spec.axes[1].values[k];
            if (delta == 0.0)
                worst_centre = std::max(worst_centre, std::abs(ratios[k] - 1.0));
            worst_mirror = std::max(worst_mirror, std::abs(ratios[k] * ratios[n_delta - 1 - k] - 1.0));
        }
        // Establish the mirror law on the independent route at a coarse subset.
        for (std::size_t k = 0; k < n_delta / 2; k += 20) {
            const double r_plus = ratio_time(routes, spec.point(gi * n_delta + k));
            const double r_minus = ratio_time(routes, spec.point(gi * n_delta + n_delta - 1 - k));
            worst_mirror_time = std::max(worst_mirror_time, std::abs(r_plus * r_minus - 1.0));
        }
    }
    SuiteOutcome out;
    out.passed = worst_centre < 1e-6 && worst_mirror < 1e-6 && worst_mirror_time < 1e-6;
    out.detail = "max |R(0) - 1| = " + sci(worst_centre) + ", max |R(D) R(-D) - 1| = " +
                 sci(worst_mirror) + " (time domain " + sci(worst_mirror_time) + "; limit 1e-06)";
    return out;
}

SuiteOutcome dynamics_closed_forms(const Routes&)
{
    StepOptions opts;
    opts.samples = 401;

    const SystemParams rabi{0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0};
    double worst_rabi = 0.0;
    for (const auto& s : evolve(rabi, 10.0, opts).samples) {
        const double expected = std::pow(std::cos(rabi.drive_g * s.t), 2);
        worst_rabi = std::max(worst_rabi, std::abs(std::norm(s.state.alpha) - expected));
    }

    const SystemParams two_pole{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
    const double root3 = std::sqrt(3.0);
    double worst_two_pole = 0.0;
    for (const auto& s : evolve(two_pole, 15.0, opts).samples) {
        const double expected = std::exp(-s.t / 2.0) *
                                (std::cos(root3 * s.t / 2.0) + std::sin(root3 * s.t / 2.0) / root3);
        worst_two_pole = std::max(worst_two_pole, std::abs(s.state.alpha - cplx(expected)));
    }
    SuiteOutcome out;
    out.passed = worst_rabi < 1e-8 && worst_two_pole < 1e-6;
    out.detail = "Rabi max error " + sci(worst_rabi) + " (limit 1e-08), two-pole max error " +
                 sci(worst_two_pole) + " (limit 1e-06)";
    return out;
}

SuiteOutcome determinism(const Routes&)
{
    const GridSpec fig3a = preset_fig3a({0.0, 5.0}, 101);
    const GridSpec fig2 = preset_fig2(4.0, {-10.0, 10.0}, 41);
    const std::string a1 = to_csv(run_sweep(fig3a, SweepRoute::quadrature, 1));
    const std::string a2 = to_csv(run_sweep(fig3a, SweepRoute::quadrature, 4));
    const std::string a3 = to_csv(run_sweep(fig3a, SweepRoute::quadrature, 3));
    const std::string b1 = to_csv(run_sweep(fig2, SweepRoute::quadrature, 1));
    const std::string b2 = to_csv(run_sweep(fig2, SweepRoute::quadrature, 4));
    const std::string c1 = to_csv(run_fig3b(preset_fig3b(5.0, 51)));
    const std::string c2 = to_csv(run_fig3b(preset_fig3b(5.0, 51)));
    SuiteOutcome out;
    out.passed = a1 == a2 && a1 == a3 && b1 == b2 && c1 == c2;
    out.detail = out.passed ? "fig3a, fig2, fig3b CSV byte-identical across 1, 3, 4 workers"
                            : "CSV differs between runs";
    return out;
}

} // namespace

Routes default_routes()
{
    return routes_with_resolvent([](cplx z, const SystemParams& p) { return resolvent(z, p); });
}

Routes routes_with_resolvent(ResolventFn resolvent_fn)
{
    Routes r;
    r.spectral = [fn = std::move(resolvent_fn)](Channel ch, const SystemParams& p) {
        return population_using(ch, p, QuadratureOptions{}, fn);
    };
    r.time_domain = [](const SystemParams& p) { return populations_time_domain(p); };
    return r;
}

SystemParams random_physical_params(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> log_mag(std::log(0.1), std::log(10.0));
    std::bernoulli_distribution sign(0.5);
    auto magnitude = [&] { return std::exp(log_mag(rng)); };
    auto signed_magnitude = [&] { return sign(rng) ? magnitude() : -magnitude(); };
    SystemParams p;
    p.kappa = 1.0;
    p.gamma_b = magnitude();
    p.gamma_c = magnitude();
    p.drive_g = magnitude();
    p.delta_b = signed_magnitude();
    p.delta_c = signed_magnitude();
    p.drive_detuning = signed_magnitude();
    return p;
}

std::vector<Suite> acceptance_suites()
{
    return {
        {"symmetric_case", symmetric_case},
        {"markov_limit", markov_limit},
        {"unitarity", unitarity},
        {"route_equivalence", route_equivalence},
        {"residue_oracle", residue_oracle},
        {"degenerate_detuning", degenerate_detuning},
        {"pole_consistency", pole_consistency},
        {"drive_effect", drive_effect},
        {"fig4_symmetry", fig4_symmetry},
        {"dynamics_closed_forms", dynamics_closed_forms},
        {"determinism", determinism},
    };
}

std::vector<SuiteReport> run_suites(const std::vector<Suite>& suites, const Routes& routes,
                                    std::ostream& log)
{
    std::vector<SuiteReport> reports;
    for (const auto& suite : suites) {
        const auto start = std::chrono::steady_clock::now();
        SuiteOutcome outcome;
        try {
            outcome = suite.run(routes);
        }
        catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2fs", seconds);
        log << (outcome.passed ? "PASS " : "FAIL ") << suite.name << " (" << timing << ") "
            << outcome.detail << '\n';
        reports.push_back({suite.name, std::move(outcome), seconds});
    }
    return reports;
}

} // namespace cavbranch

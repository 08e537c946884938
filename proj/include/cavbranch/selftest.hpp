#pragma once

#include "cavbranch/dynamics.hpp"
#include "cavbranch/spectral.hpp"

#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace cavbranch {

// The two population routes the property suites exercise. Swapping one out
// (for instance with a deliberately broken resolvent) must make a suite fail.
struct Routes
{
    std::function<PopulationEstimate(Channel, const SystemParams&)> spectral;
    std::function<ChannelPopulations(const SystemParams&)> time_domain;
};

Routes default_routes();

// Spectral route built on a caller-supplied resolvent.
Routes routes_with_resolvent(ResolventFn resolvent_fn);

// kappa = 1; gamma_b, gamma_c, G log-uniform in [0.1, 10]; detunings with random sign
// and magnitude log-uniform in [0.1, 10].
SystemParams random_physical_params(std::mt19937_64& rng);

struct SuiteOutcome
{
    bool passed = false;
    std::string detail; // worst observed deviation, or what failed
};

struct Suite
{
    std::string name;
    std::function<SuiteOutcome(const Routes&)> run;
};

// One suite per acceptance criterion, in order.
std::vector<Suite> acceptance_suites();

struct SuiteReport
{
    std::string name;
    SuiteOutcome outcome;
    double seconds = 0.0;
};

// Runs the suites, printing "PASS|FAIL name (seconds) detail" per suite.
std::vector<SuiteReport> run_suites(const std::vector<Suite>& suites, const Routes& routes,
                                    std::ostream& log);

} // namespace cavbranch

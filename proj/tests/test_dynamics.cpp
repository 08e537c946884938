#include "cavbranch/dynamics.hpp"
#include "cavbranch/errors.hpp"
#include "cavbranch/selftest.hpp"
#include "cavbranch/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cavbranch;

TEST_CASE("trajectory starts in the excited state")
{
    StepOptions o;
    o.samples = 11;
    const Trajectory tr = evolve({1, 1, 2, -2, 1, 2, 1}, 1.0, o);
    REQUIRE(tr.samples.size() == 11);
    const auto& s0 = tr.samples.front();
    CHECK(s0.t == 0.0);
    CHECK(std::norm(s0.state.alpha) == 1.0);
    CHECK(s0.rho_b == 0.0);
    CHECK(s0.rho_c == 0.0);
    CHECK(tr.samples.back().t == 1.0);
}

TEST_CASE("closed Rabi oscillation")
{
    StepOptions o;
    o.samples = 101;
    for (const auto& s : evolve({0, 0, 0, 0, 1, 0, 1}, 10.0, o).samples) {
        CHECK(std::abs(std::norm(s.state.alpha) - std::pow(std::cos(s.t), 2)) < 1e-8);
        CHECK(std::abs(s.state.norm() - 1.0) < 1e-8);
    }
}

TEST_CASE("two-pole decay matches its inverse Laplace transform")
{
    StepOptions o;
    o.samples = 201;
    const double w = std::sqrt(3.0) / 2;
    for (const auto& s : evolve({1, 0, 0, 0, 0, 0, 1}, 12.0, o).samples) {
        const double exact = std::exp(-s.t / 2) * (std::cos(w * s.t) + std::sin(w * s.t) / std::sqrt(3.0));
        CHECK(std::abs(s.state.alpha - cplx(exact)) < 1e-6);
    }
}

TEST_CASE("norm decreases monotonically and probability balances")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const SystemParams p = random_physical_params(rng);
        const Trajectory tr = evolve(p, 10.0);
        double previous = 1.0;
        for (const auto& s : tr.samples) {
            CHECK(s.state.norm() <= previous + 1e-12);
            CHECK(std::abs(s.balance() - 1.0) < 1e-7);
            previous = s.state.norm();
        }
    }
}

TEST_CASE("time-domain populations")
{
    const auto sole = populations_time_domain({1, 0, 1, 0, 1, 1, 1});
    CHECK(std::abs(sole.b.probability - 1.0) < 1e-6);
    CHECK(sole.c.probability == 0.0);

    const auto sym = populations_time_domain({1, 1, 2, -2, 1, 0, 1});
    CHECK(std::abs(sym.b.probability - 0.5) < 1e-6);
    CHECK(std::abs(sym.c.probability - 0.5) < 1e-6);
}

TEST_CASE("time-domain route matches the spectral route")
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        const SystemParams p = random_physical_params(rng);
        const auto td = populations_time_domain(p);
        CHECK(std::abs(td.b.probability - population(Channel::b, p).probability) < 1e-5);
        CHECK(std::abs(td.c.probability - population(Channel::c, p).probability) < 1e-5);
    }
}

TEST_CASE("Markov limit of the delivered populations")
{
    const BranchingResult r = branching_time_domain({0.6, 0.3, 2, -2, 1, 2, 100});
    CHECK(std::abs(r.ratio / 2.0 - 1.0) < 0.01);
}

TEST_CASE("automatic horizon leaves a negligible norm")
{
    const SystemParams p{1, 1, 2, -2, 1, 2, 1};
    const double t = auto_time_horizon(p);
    CHECK(t > 0.0);
    CHECK(evolve(p, t).samples.back().state.norm() < 1e-6);
}

TEST_CASE("too slow a decay is reported")
{
    StepOptions o;
    o.rate_floor = 0.9;
    CHECK_THROWS_AS(populations_time_domain({1, 0, 0, 0, 0, 0, 1}, o), SlowConvergence);
}

TEST_CASE("step options are validated")
{
    StepOptions o;
    o.samples = 1;
    CHECK_THROWS_AS(o.validate(), ValidationError);
    CHECK_THROWS_AS(evolve({1, 1, 0, 0, 0, 0, 1}, -1.0), ValidationError);
}

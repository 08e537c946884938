#pragma once

#include "cavbranch/dynamics.hpp"
#include "cavbranch/spectral.hpp"
#include "cavbranch/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cavbranch::cli {

enum ExitCode : int { kOk = 0, kSelftestFailed = 1, kInvalidInput = 2, kNumericalFailure = 3 };

struct SweepConfig
{
    std::vector<Axis> axes;
    std::optional<double> omega_bc;
    SweepQuantity quantity = SweepQuantity::branching;
};

struct FigureConfig
{
    std::string name;
    std::optional<double> omega_bc;
    std::optional<std::vector<double>> g_values;
    std::optional<Range> range;
    std::optional<int> points;
    std::optional<double> t_max;
    std::optional<double> delta_b; // fig3b only; defaults to +2
};

// Everything one invocation needs. Exactly one of sweep / figure is present, and
// only for the matching command.
struct RunConfig
{
    std::string command; // point | dynamics | sweep | figure
    SystemParams params{1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0};
    QuadratureOptions quadrature;
    StepOptions step;
    std::string route = "quadrature"; // quadrature | time-domain | both (point also: residue)
    std::string format = "csv";       // csv | json
    std::string out;                  // empty: standard output
    std::optional<double> t_max;      // dynamics
    std::optional<int> workers;       // sweep / figure
    std::optional<SweepConfig> sweep;
    std::optional<FigureConfig> figure;

    // Throws ValidationError when the fields do not fit the command's schema.
    void validate() const;
};

// Accepts either a bare RunConfig object or a JSON report carrying one under "config".
RunConfig parse_run_config(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);

const std::vector<std::string>& figure_names();

int cmd_point(const RunConfig& config, std::ostream& out);
int cmd_dynamics(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_figure(const RunConfig& config, std::ostream& out);
int cmd_selftest(std::ostream& out);

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cavbranch::cli

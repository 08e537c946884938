#pragma once

#include "cavbranch/dynamics.hpp"
#include "cavbranch/params.hpp"
#include "cavbranch/spectral.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cavbranch {

enum class SweepRoute { quadrature, time_domain, both };

std::string_view to_string(SweepRoute r);
std::optional<SweepRoute> parse_sweep_route(std::string_view name);

// What each grid point evaluates.
enum class SweepQuantity {
    branching,  // P_b, P_c and P_b / P_c
    normalized, // R_b, R_c: populations relative to the single-channel runs
};

struct Axis
{
    std::string name;
    std::vector<double> values;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct GridSpec
{
    // Outermost axis first. Names are SystemParams fields, the aliases "g" and
    // "delta" (drive_g, drive_detuning), or "cavity_detuning" when omega_bc is set.
    std::vector<Axis> axes;
    SystemParams base;
    // Separation of |b> and |c>. When set, the axis "cavity_detuning" (d = d_b + d_c)
    // derives d_b = (d + omega_bc) / 2 and d_c = (d - omega_bc) / 2.
    std::optional<double> omega_bc;
    SweepQuantity quantity = SweepQuantity::branching;
    QuadratureOptions quadrature;
    StepOptions step;
    Metadata metadata;

    // Throws ValidationError ("empty axis", unknown names, invalid points).
    void validate() const;
    std::size_t size() const;
    // Parameters at a row-major flat index.
    SystemParams point(std::size_t index) const;
    std::vector<double> coordinates(std::size_t index) const;
};

using Cell = std::variant<double, std::string>;

struct SweepTable
{
    Metadata metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::size_t column(std::string_view name) const; // throws std::out_of_range
    double number(std::size_t row, std::string_view name) const;
};

// lo, ..., hi with n points; mirror-symmetric ranges give exactly negated values.
std::vector<double> linspace(double lo, double hi, int n);

// Evaluates every grid point, in parallel when workers != 1 (0 picks the hardware
// concurrency). Rows come out in grid order whatever the scheduling; per-point
// failures land in the "error" column.
SweepTable run_sweep(const GridSpec& spec, SweepRoute route, unsigned workers = 0);

struct Range
{
    double lo;
    double hi;
};

// Cavity detuning scan without drive; R_b, R_c against the single-channel runs.
GridSpec preset_fig2(double omega_bc = 4.0, Range delta_range = {-10.0, 10.0}, int n_points = 201);

// Drive-strength scan at d_b = -d_c = 2, Delta = 2.
GridSpec preset_fig3a(Range g_range = {0.0, 5.0}, int n_points = 201);

// Drive-detuning scans for several drive strengths, d_b = -d_c = 2 (fig4) or 0.5 (fig5).
GridSpec preset_fig4(Range delta_range = {-10.0, 10.0},
                     std::vector<double> g_values = {0.5, 1.0, 2.0}, int n_points = 201);
GridSpec preset_fig5(Range delta_range = {-10.0, 10.0},
                     std::vector<double> g_values = {0.5, 1.0, 2.0}, int n_points = 201);

// Excited-state population in time, with both channels open and with gamma_b = 0.
struct Fig3bSpec
{
    SystemParams both;
    SystemParams single;
    double t_max = 10.0;
    int samples = 201;
    StepOptions step;
    Metadata metadata;
};

Fig3bSpec preset_fig3b(double t_max = 10.0, int samples = 201, double delta_b = 2.0);
SweepTable run_fig3b(const Fig3bSpec& spec);

} // namespace cavbranch

#include "cavbranch/sweep.hpp"
#include "cavbranch/errors.hpp"
#include "cavbranch/table_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

namespace cavbranch {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string canonical_axis(const std::string& name)
{
    if (name == "g")
        return "drive_g";
    if (name == "delta")
        return "drive_detuning";
    return name;
}

double* field(SystemParams& p, const std::string& name)
{
    if (name == "gamma_b")
        return &p.gamma_b;
    if (name == "gamma_c")
        return &p.gamma_c;
    if (name == "delta_b")
        return &p.delta_b;
    if (name == "delta_c")
        return &p.delta_c;
    if (name == "drive_g")
        return &p.drive_g;
    if (name == "drive_detuning")
        return &p.drive_detuning;
    if (name == "kappa")
        return &p.kappa;
    return nullptr;
}

struct Populations
{
    PopulationEstimate b;
    PopulationEstimate c;
};

Populations evaluate(const SystemParams& p, Route route, const GridSpec& spec)
{
    if (route == Route::time_domain) {
        const auto pops = populations_time_domain(p, spec.step);
        return {pops.b, pops.c};
    }
    return {population(Channel::b, p, spec.quadrature), population(Channel::c, p, spec.quadrature)};
}

double safe_ratio(double num, double num_err, double den, double den_err)
{
    try {
        return make_branching(num, num_err, den, den_err, Route::quadrature).ratio;
    }
    catch (const NumericalError&) {
        return kNaN;
    }
}

std::vector<std::string> value_columns(SweepQuantity q, SweepRoute route)
{
    std::vector<std::string> cols;
    if (q == SweepQuantity::branching)
        cols = {"p_b", "p_c", "ratio", "err_b", "err_c"};
    else
        cols = {"delta_b", "delta_c", "p_b", "p_c", "p_b_single", "p_c_single",
                "r_b", "r_c", "ratio", "err_b", "err_c"};
    cols.push_back("route");
    if (route == SweepRoute::both)
        for (const char* c : {"p_b_time", "p_c_time", "disagreement"})
            cols.emplace_back(c);
    cols.emplace_back("error");
    return cols;
}

std::vector<Cell> evaluate_row(const GridSpec& spec, std::size_t index, SweepRoute route,
                               const std::vector<std::string>& value_cols)
{
    std::vector<Cell> row;
    for (double c : spec.coordinates(index))
        row.emplace_back(c);
    const std::size_t first_value = row.size();

    const Route primary = route == SweepRoute::time_domain ? Route::time_domain : Route::quadrature;
    try {
        const SystemParams p = spec.point(index);
        const Populations full = evaluate(p, primary, spec);
        const double ratio =
            safe_ratio(full.b.probability, full.b.error, full.c.probability, full.c.error);
        if (spec.quantity == SweepQuantity::branching) {
            for (double v : {full.b.probability, full.c.probability, ratio, full.b.error,
                             full.c.error})
                row.emplace_back(v);
        }
        else {
            SystemParams only_b = p;
            only_b.gamma_c = 0.0;
            SystemParams only_c = p;
            only_c.gamma_b = 0.0;
            const double single_b = evaluate(only_b, primary, spec).b.probability;
            const double single_c = evaluate(only_c, primary, spec).c.probability;
            for (double v : {p.delta_b, p.delta_c, full.b.probability, full.c.probability,
                             single_b, single_c, full.b.probability / single_b,
                             full.c.probability / single_c, ratio, full.b.error, full.c.error})
                row.emplace_back(v);
        }
        row.emplace_back(std::string(to_string(route)));
        if (route == SweepRoute::both) {
            const Populations alt = evaluate(p, Route::time_domain, spec);
            const double disagreement =
                std::max(std::abs(full.b.probability - alt.b.probability),
                         std::abs(full.c.probability - alt.c.probability));
            for (double v : {alt.b.probability, alt.c.probability, disagreement})
                row.emplace_back(v);
        }
        row.emplace_back(std::isfinite(ratio) ? std::string() : std::string("ratio undefined"));
    }
    catch (const std::exception& e) {
        row.resize(first_value);
        for (const auto& col : value_cols) {
            if (col == "route")
                row.emplace_back(std::string(to_string(route)));
            else if (col == "error")
                row.emplace_back(std::string(e.what()));
            else
                row.emplace_back(kNaN);
        }
    }
    return row;
}

std::string axis_summary(const Axis& axis)
{
    return format_number(axis.values.front()) + ":" + format_number(axis.values.back()) + ":" +
           std::to_string(axis.values.size());
}

Metadata table_metadata(const GridSpec& spec, SweepRoute route)
{
    Metadata meta = spec.metadata;
    meta.emplace_back("quantity", spec.quantity == SweepQuantity::branching ? "branching" : "normalized");
    meta.emplace_back("route", std::string(to_string(route)));
    meta.emplace_back("units", "kappa");
    const SystemParams& b = spec.base;
    meta.emplace_back("gamma_b", format_number(b.gamma_b));
    meta.emplace_back("gamma_c", format_number(b.gamma_c));
    meta.emplace_back("delta_b", format_number(b.delta_b));
    meta.emplace_back("delta_c", format_number(b.delta_c));
    meta.emplace_back("drive_g", format_number(b.drive_g));
    meta.emplace_back("drive_detuning", format_number(b.drive_detuning));
    meta.emplace_back("kappa", format_number(b.kappa));
    if (spec.omega_bc)
        meta.emplace_back("omega_bc", format_number(*spec.omega_bc));
    for (const auto& axis : spec.axes)
        meta.emplace_back("axis." + canonical_axis(axis.name), axis_summary(axis));
    if (route != SweepRoute::time_domain) {
        meta.emplace_back("quadrature_rel_tol", format_number(spec.quadrature.rel_tol));
        meta.emplace_back("quadrature_abs_tol", format_number(spec.quadrature.abs_tol));
        meta.emplace_back("quadrature_max_subdivisions",
                          std::to_string(spec.quadrature.max_subdivisions));
    }
    if (route != SweepRoute::quadrature) {
        meta.emplace_back("step_rel_tol", format_number(spec.step.rel_tol));
        meta.emplace_back("step_abs_tol", format_number(spec.step.abs_tol));
        meta.emplace_back("step_max_time", format_number(spec.step.max_time));
    }
    return meta;
}

GridSpec drive_detuning_preset(const char* figure, double cavity_detuning, const char* caption,
                               Range range, std::vector<double> g_values, int n_points)
{
    if (g_values.empty())
        throw ValidationError("empty axis");
    GridSpec spec;
    spec.base.gamma_b = 1.0;
    spec.base.gamma_c = 1.0;
    spec.base.delta_b = cavity_detuning;
    spec.base.delta_c = -cavity_detuning;
    spec.axes = {{"drive_g", std::move(g_values)},
                 {"drive_detuning", linspace(range.lo, range.hi, n_points)}};
    spec.metadata = {{"figure", figure},
                     {"caption_fixed", caption}};
    return spec;
}

} // namespace

std::string_view to_string(SweepRoute r)
{
    switch (r) {
    case SweepRoute::quadrature:
        return "quadrature";
    case SweepRoute::time_domain:
        return "time_domain";
    case SweepRoute::both:
        return "both";
    }
    return "?";
}

std::optional<SweepRoute> parse_sweep_route(std::string_view name)
{
    if (name == "quadrature")
        return SweepRoute::quadrature;
    if (name == "time_domain" || name == "time-domain")
        return SweepRoute::time_domain;
    if (name == "both")
        return SweepRoute::both;
    return std::nullopt;
}

std::vector<double> linspace(double lo, double hi, int n)
{
    if (n < 2)
        throw ValidationError("n_points must be ≥ 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double last = n - 1;
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = lo * ((last - i) / last) + hi * (i / last);
    return out;
}

void GridSpec::validate() const
{
    if (axes.empty())
        throw ValidationError("grid has no axes");
    std::set<std::string> seen;
    for (const auto& axis : axes) {
        if (axis.values.empty())
            throw ValidationError("empty axis");
        const std::string name = canonical_axis(axis.name);
        if (name == "cavity_detuning") {
            if (!omega_bc)
                throw ValidationError("axis cavity_detuning requires omega_bc");
        }
        else {
            SystemParams scratch;
            if (!field(scratch, name))
                throw ValidationError("unknown axis '" + axis.name + "'");
        }
        if (!seen.insert(name).second)
            throw ValidationError("duplicate axis '" + axis.name + "'");
        for (double v : axis.values)
            if (!std::isfinite(v))
                throw ValidationError("axis '" + axis.name + "' has a non-finite value");
    }
    if (seen.count("cavity_detuning") && (seen.count("delta_b") || seen.count("delta_c")))
        throw ValidationError("cavity_detuning axis conflicts with delta_b/delta_c axes");
    if (omega_bc && !std::isfinite(*omega_bc))
        throw ValidationError("omega_bc must be finite");
    quadrature.validate();
    step.validate();

    for (std::size_t i = 0, n = size(); i < n; ++i) {
        const SystemParams p = point(i);
        cavbranch::validate_decaying(p);
        if (quantity == SweepQuantity::normalized && (p.gamma_b <= 0.0 || p.gamma_c <= 0.0))
            throw ValidationError("normalized populations need gamma_b > 0 and gamma_c > 0");
    }
}

std::size_t GridSpec::size() const
{
    std::size_t n = 1;
    for (const auto& axis : axes)
        n *= axis.values.size();
    return n;
}

std::vector<double> GridSpec::coordinates(std::size_t index) const
{
    std::vector<double> out(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
        const auto len = axes[k].values.size();
        out[k] = axes[k].values[index % len];
        index /= len;
    }
    return out;
}

SystemParams GridSpec::point(std::size_t index) const
{
    SystemParams p = base;
    if (omega_bc) {
        const double sum = base.delta_b + base.delta_c;
        p.delta_b = 0.5 * (sum + *omega_bc);
        p.delta_c = 0.5 * (sum - *omega_bc);
    }
    const auto coords = coordinates(index);
    for (std::size_t k = 0; k < axes.size(); ++k) {
        const std::string name = canonical_axis(axes[k].name);
        if (name == "cavity_detuning") {
            p.delta_b = 0.5 * (coords[k] + *omega_bc);
            p.delta_c = 0.5 * (coords[k] - *omega_bc);
        }
        else if (double* f = field(p, name)) {
            *f = coords[k];
        }
        else {
            throw ValidationError("unknown axis '" + axes[k].name + "'");
        }
    }
    return p;
}

std::size_t SweepTable::column(std::string_view name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw std::out_of_range("no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

double SweepTable::number(std::size_t row, std::string_view name) const
{
    return std::get<double>(rows.at(row).at(column(name)));
}

SweepTable run_sweep(const GridSpec& spec, SweepRoute route, unsigned workers)
{
    spec.validate();

    SweepTable table;
    table.metadata = table_metadata(spec, route);
    for (const auto& axis : spec.axes)
        table.columns.push_back(canonical_axis(axis.name));
    const auto values = value_columns(spec.quantity, route);
    table.columns.insert(table.columns.end(), values.begin(), values.end());

    const std::size_t n = spec.size();
    table.rows.resize(n);
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++)
            table.rows[i] = evaluate_row(spec, i, route, values);
    };
    if (workers <= 1) {
        work();
    }
    else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    return table;
}

GridSpec preset_fig2(double omega_bc, Range delta_range, int n_points)
{
    GridSpec spec;
    spec.base.gamma_b = 1.0;
    spec.base.gamma_c = 1.0;
    spec.omega_bc = omega_bc;
    spec.quantity = SweepQuantity::normalized;
    spec.axes = {{"cavity_detuning", linspace(delta_range.lo, delta_range.hi, n_points)}};
    spec.metadata = {
        {"figure", "fig2"},
        {"caption_fixed", "no driving field (G = 0); R_b = P_b[gamma_b=1,gamma_c=1] / "
                          "P_b[gamma_b=1,gamma_c=0]; R_c = P_c[gamma_b=1,gamma_c=1] / "
                          "P_c[gamma_b=0,gamma_c=1]; delta = delta_b + delta_c"},
    };
    return spec;
}

GridSpec preset_fig3a(Range g_range, int n_points)
{
    GridSpec spec;
    spec.base.gamma_b = 1.0;
    spec.base.gamma_c = 1.0;
    spec.base.delta_b = 2.0;
    spec.base.delta_c = -2.0;
    spec.base.drive_detuning = 2.0;
    spec.axes = {{"drive_g", linspace(g_range.lo, g_range.hi, n_points)}};
    spec.metadata = {{"figure", "fig3a"},
                     {"caption_fixed", "delta_b = -delta_c = 2.0; Delta = 2.0"}};
    return spec;
}

GridSpec preset_fig4(Range delta_range, std::vector<double> g_values, int n_points)
{
    return drive_detuning_preset("fig4", 2.0, "delta_b = -delta_c = 2.0", delta_range, std::move(g_values), n_points);
}

GridSpec preset_fig5(Range delta_range, std::vector<double> g_values, int n_points)
{
    return drive_detuning_preset("fig5", 0.5, "delta_b = -delta_c = 0.5", delta_range, std::move(g_values), n_points);
}

Fig3bSpec preset_fig3b(double t_max, int samples, double delta_b)
{
    Fig3bSpec spec;
    spec.both = {1.0, 1.0, delta_b, -2.0, 1.0, 2.0, 1.0};
    spec.single = spec.both;
    spec.single.gamma_b = 0.0;
    spec.t_max = t_max;
    spec.samples = samples;
    spec.metadata = {
        {"figure", "fig3b"},
        {"caption_fixed", "G = 1.0; delta_c = -2.0; Delta = 2.0; single-channel run has gamma_b = 0"},
        {"delta_b_assumed", format_number(delta_b)},
    };
    return spec;
}

SweepTable run_fig3b(const Fig3bSpec& spec)
{
    if (spec.samples < 2)
        throw ValidationError("n_points must be ≥ 2");
    StepOptions step = spec.step;
    step.samples = spec.samples;
    const Trajectory both = evolve(spec.both, spec.t_max, step);
    const Trajectory single = evolve(spec.single, spec.t_max, step);

    SweepTable table;
    table.metadata = spec.metadata;
    table.metadata.emplace_back("units", "kappa");
    for (const auto& [name, p] : {std::pair{"both", spec.both}, std::pair{"single", spec.single}}) {
        const std::string prefix = std::string(name) + ".";
        table.metadata.emplace_back(prefix + "gamma_b", format_number(p.gamma_b));
        table.metadata.emplace_back(prefix + "gamma_c", format_number(p.gamma_c));
        table.metadata.emplace_back(prefix + "delta_b", format_number(p.delta_b));
        table.metadata.emplace_back(prefix + "delta_c", format_number(p.delta_c));
        table.metadata.emplace_back(prefix + "drive_g", format_number(p.drive_g));
        table.metadata.emplace_back(prefix + "drive_detuning", format_number(p.drive_detuning));
        table.metadata.emplace_back(prefix + "kappa", format_number(p.kappa));
    }
    table.metadata.emplace_back("t_max", format_number(spec.t_max));
    table.metadata.emplace_back("samples", std::to_string(spec.samples));
    table.metadata.emplace_back("step_rel_tol", format_number(step.rel_tol));
    table.metadata.emplace_back("step_abs_tol", format_number(step.abs_tol));

    table.columns = {"t", "alpha2_both", "alpha2_single", "norm_both", "norm_single"};
    for (std::size_t i = 0; i < both.samples.size(); ++i) {
        const auto& x = both.samples[i];
        const auto& y = single.samples[i];
        table.rows.push_back({x.t, std::norm(x.state.alpha), std::norm(y.state.alpha),
                              x.state.norm(), y.state.norm()});
    }
    return table;
}

} // namespace cavbranch

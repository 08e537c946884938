#include "cavbranch/cli.hpp"
#include "cavbranch/errors.hpp"
#include "cavbranch/model.hpp"
#include "cavbranch/selftest.hpp"
#include "cavbranch/table_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace cavbranch::cli {

using nlohmann::json;

namespace {

// ---- JSON <-> RunConfig --------------------------------------------------

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object())
        throw ValidationError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ValidationError("unknown key '" + key + "' in " + where);
}

template <class T>
void read_opt(const json& obj, const char* key, T& into)
{
    if (!obj.contains(key))
        return;
    try {
        into = obj.at(key).get<T>();
    }
    catch (const json::exception&) {
        throw ValidationError(std::string("bad value for '") + key + "'");
    }
}

template <class T>
void read_opt(const json& obj, const char* key, std::optional<T>& into)
{
    if (!obj.contains(key))
        return;
    T value{};
    read_opt(obj, key, value);
    into = value;
}

SystemParams parse_params(const json& obj, SystemParams p)
{
    reject_unknown_keys(obj, {"gamma_b", "gamma_c", "delta_b", "delta_c", "drive_g", "drive_detuning", "kappa"},
                        "params");
    read_opt(obj, "gamma_b", p.gamma_b);
    read_opt(obj, "gamma_c", p.gamma_c);
    read_opt(obj, "delta_b", p.delta_b);
    read_opt(obj, "delta_c", p.delta_c);
    read_opt(obj, "drive_g", p.drive_g);
    read_opt(obj, "drive_detuning", p.drive_detuning);
    read_opt(obj, "kappa", p.kappa);
    return p;
}

json params_json(const SystemParams& p)
{
    return {{"gamma_b", p.gamma_b}, {"gamma_c", p.gamma_c},           {"delta_b", p.delta_b},
            {"delta_c", p.delta_c}, {"drive_g", p.drive_g},           {"drive_detuning", p.drive_detuning},
            {"kappa", p.kappa}};
}

Range parse_range_json(const json& v)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ValidationError("range must be [lo, hi]");
    return {v[0].get<double>(), v[1].get<double>()};
}

Axis parse_axis_json(const json& obj)
{
    reject_unknown_keys(obj, {"name", "values", "range", "points"}, "sweep axis");
    Axis axis;
    read_opt(obj, "name", axis.name);
    if (axis.name.empty())
        throw ValidationError("sweep axis needs a name");
    if (obj.contains("values")) {
        if (obj.contains("range"))
            throw ValidationError("sweep axis '" + axis.name + "' has both values and range");
        read_opt(obj, "values", axis.values);
    }
    else if (obj.contains("range")) {
        const Range r = parse_range_json(obj.at("range"));
        int points = 0;
        read_opt(obj, "points", points);
        axis.values = linspace(r.lo, r.hi, points);
    }
    return axis;
}

// ---- command-line value parsing ------------------------------------------

double parse_double(const std::string& text, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
        return v;
    }
    catch (const std::exception&) {
        throw ValidationError("cannot parse " + what + " from '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        parts.push_back(item);
    return parts;
}

std::vector<double> parse_list(const std::string& text, const std::string& what)
{
    std::vector<double> values;
    for (const auto& part : split(text, ','))
        values.push_back(parse_double(part, what));
    return values;
}

Range parse_range_text(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 2)
        throw ValidationError("--range expects lo:hi, got '" + text + "'");
    return {parse_double(parts[0], "range"), parse_double(parts[1], "range")};
}

// name=lo:hi:n or name=v1,v2,...
Axis parse_axis_text(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError("--axis expects name=lo:hi:n or name=v1,v2,..., got '" + text + "'");
    Axis axis{text.substr(0, eq), {}};
    const std::string rest = text.substr(eq + 1);
    if (rest.empty())
        return axis;
    const auto parts = split(rest, ':');
    if (parts.size() == 3) {
        const double n = parse_double(parts[2], "axis points");
        axis.values = linspace(parse_double(parts[0], "axis"), parse_double(parts[1], "axis"),
                               static_cast<int>(n));
    }
    else {
        axis.values = parse_list(rest, "axis values");
    }
    return axis;
}

// ---- output --------------------------------------------------------------

template <class Fn>
void with_output(const RunConfig& config, std::ostream& fallback, Fn&& fn)
{
    if (config.out.empty()) {
        fn(fallback);
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file)
        throw ValidationError("cannot open output file '" + config.out + "'");
    fn(file);
}

void emit(const RunConfig& config, const SweepTable& table, std::ostream& out)
{
    with_output(config, out, [&](std::ostream& os) {
        if (config.format == "json")
            os << json{{"config", to_json(config)}, {"table", cavbranch::to_json(table)}}.dump(2) << '\n';
        else
            write_csv(table, os);
    });
}

Metadata params_metadata(const RunConfig& config)
{
    const SystemParams& p = config.params;
    return {{"command", config.command},
            {"units", "kappa"},
            {"gamma_b", format_number(p.gamma_b)},
            {"gamma_c", format_number(p.gamma_c)},
            {"delta_b", format_number(p.delta_b)},
            {"delta_c", format_number(p.delta_c)},
            {"drive_g", format_number(p.drive_g)},
            {"drive_detuning", format_number(p.drive_detuning)},
            {"kappa", format_number(p.kappa)}};
}

SweepRoute sweep_route(const RunConfig& config)
{
    const auto r = parse_sweep_route(config.route);
    if (!r)
        throw ValidationError("route must be quadrature, time-domain or both");
    return *r;
}

unsigned worker_count(const RunConfig& config) { return static_cast<unsigned>(config.workers.value_or(0)); }

} // namespace

const std::vector<std::string>& figure_names()
{
    static const std::vector<std::string> names = {"fig2", "fig3a", "fig3b", "fig4", "fig5"};
    return names;
}

void RunConfig::validate() const
{
    static const std::set<std::string> commands = {"point", "dynamics", "sweep", "figure"};
    if (!commands.count(command))
        throw ValidationError("unknown command '" + command + "'");
    cavbranch::validate(params);
    quadrature.validate();
    step.validate();
    if (format != "csv" && format != "json")
        throw ValidationError("format must be csv or json");
    const bool point_route = command == "point" && route == "residue";
    if (!point_route && !parse_sweep_route(route))
        throw ValidationError("route must be quadrature, time-domain or both");
    if (sweep && command != "sweep")
        throw ValidationError("'sweep' block is only valid for the sweep command");
    if (figure && command != "figure")
        throw ValidationError("'figure' block is only valid for the figure command");
    if (t_max && command != "dynamics")
        throw ValidationError("'t_max' is only valid for the dynamics command");
    if (t_max && !(*t_max > 0.0))
        throw ValidationError("t_max must be > 0");
    if (workers && *workers < 0)
        throw ValidationError("workers must be ≥ 0");
    if (command == "sweep" && !sweep)
        throw ValidationError("sweep command needs a 'sweep' block or --axis flags");
    if (command == "figure") {
        if (!figure || figure->name.empty())
            throw ValidationError("figure command needs a figure name");
        const auto& names = figure_names();
        if (std::find(names.begin(), names.end(), figure->name) == names.end()) {
            std::string valid;
            for (const auto& n : names)
                valid += (valid.empty() ? "" : ", ") + n;
            throw ValidationError("unknown figure '" + figure->name + "'; valid names: " + valid);
        }
    }
}

RunConfig parse_run_config(const json& doc)
{
    if (doc.is_object() && doc.contains("config"))
        return parse_run_config(doc.at("config"));
    reject_unknown_keys(doc, {"command", "params", "quadrature", "step", "route", "format", "out",
                              "t_max", "workers", "sweep", "figure"},
                        "config");
    RunConfig c;
    read_opt(doc, "command", c.command);
    if (doc.contains("params"))
        c.params = parse_params(doc.at("params"), c.params);
    if (doc.contains("quadrature")) {
        const auto& q = doc.at("quadrature");
        reject_unknown_keys(q, {"rel_tol", "abs_tol", "max_subdivisions", "pole_breakpoints"}, "quadrature");
        read_opt(q, "rel_tol", c.quadrature.rel_tol);
        read_opt(q, "abs_tol", c.quadrature.abs_tol);
        read_opt(q, "max_subdivisions", c.quadrature.max_subdivisions);
        read_opt(q, "pole_breakpoints", c.quadrature.pole_breakpoints);
    }
    if (doc.contains("step")) {
        const auto& s = doc.at("step");
        reject_unknown_keys(s, {"rel_tol", "abs_tol", "samples", "norm_cutoff", "max_time", "rate_floor", "max_steps"},
                            "step");
        read_opt(s, "rel_tol", c.step.rel_tol);
        read_opt(s, "abs_tol", c.step.abs_tol);
        read_opt(s, "samples", c.step.samples);
        read_opt(s, "norm_cutoff", c.step.norm_cutoff);
        read_opt(s, "max_time", c.step.max_time);
        read_opt(s, "rate_floor", c.step.rate_floor);
        read_opt(s, "max_steps", c.step.max_steps);
    }
    read_opt(doc, "route", c.route);
    read_opt(doc, "format", c.format);
    read_opt(doc, "out", c.out);
    read_opt(doc, "t_max", c.t_max);
    read_opt(doc, "workers", c.workers);
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        reject_unknown_keys(s, {"axes", "omega_bc", "quantity"}, "sweep");
        SweepConfig sweep;
        if (s.contains("axes")) {
            if (!s.at("axes").is_array())
                throw ValidationError("sweep axes must be an array");
            for (const auto& a : s.at("axes"))
                sweep.axes.push_back(parse_axis_json(a));
        }
        read_opt(s, "omega_bc", sweep.omega_bc);
        std::string quantity = "branching";
        read_opt(s, "quantity", quantity);
        if (quantity == "normalized")
            sweep.quantity = SweepQuantity::normalized;
        else if (quantity != "branching")
            throw ValidationError("sweep quantity must be branching or normalized");
        c.sweep = std::move(sweep);
    }
    if (doc.contains("figure")) {
        const auto& f = doc.at("figure");
        reject_unknown_keys(f, {"name", "omega_bc", "g_values", "range", "points", "t_max", "delta_b"}, "figure");
        FigureConfig fig;
        read_opt(f, "name", fig.name);
        read_opt(f, "omega_bc", fig.omega_bc);
        read_opt(f, "g_values", fig.g_values);
        if (f.contains("range"))
            fig.range = parse_range_json(f.at("range"));
        read_opt(f, "points", fig.points);
        read_opt(f, "t_max", fig.t_max);
        read_opt(f, "delta_b", fig.delta_b);
        c.figure = std::move(fig);
    }
    return c;
}

json to_json(const RunConfig& c)
{
    json doc = {
        {"command", c.command},
        {"params", params_json(c.params)},
        {"quadrature",
         {{"rel_tol", c.quadrature.rel_tol},
          {"abs_tol", c.quadrature.abs_tol},
          {"max_subdivisions", c.quadrature.max_subdivisions},
          {"pole_breakpoints", c.quadrature.pole_breakpoints}}},
        {"step",
         {{"rel_tol", c.step.rel_tol},
          {"abs_tol", c.step.abs_tol},
          {"samples", c.step.samples},
          {"norm_cutoff", c.step.norm_cutoff},
          {"max_time", c.step.max_time},
          {"rate_floor", c.step.rate_floor},
          {"max_steps", c.step.max_steps}}},
        {"route", c.route},
        {"format", c.format},
        {"out", c.out},
    };
    if (c.t_max)
        doc["t_max"] = *c.t_max;
    if (c.workers)
        doc["workers"] = *c.workers;
    if (c.sweep) {
        json axes = json::array();
        for (const auto& a : c.sweep->axes)
            axes.push_back({{"name", a.name}, {"values", a.values}});
        json s = {{"axes", axes},
                  {"quantity", c.sweep->quantity == SweepQuantity::branching ? "branching" : "normalized"}};
        if (c.sweep->omega_bc)
            s["omega_bc"] = *c.sweep->omega_bc;
        doc["sweep"] = s;
    }
    if (c.figure) {
        json f = {{"name", c.figure->name}};
        if (c.figure->omega_bc)
            f["omega_bc"] = *c.figure->omega_bc;
        if (c.figure->g_values)
            f["g_values"] = *c.figure->g_values;
        if (c.figure->range)
            f["range"] = {c.figure->range->lo, c.figure->range->hi};
        if (c.figure->points)
            f["points"] = *c.figure->points;
        if (c.figure->t_max)
            f["t_max"] = *c.figure->t_max;
        if (c.figure->delta_b)
            f["delta_b"] = *c.figure->delta_b;
        doc["figure"] = f;
    }
    return doc;
}

int cmd_point(const RunConfig& config, std::ostream& out)
{
    config.validate();
    const SystemParams& p = validate_decaying(config.params);
    const PoleSet poles = find_poles(p);

    BranchingResult result;
    std::optional<BranchingResult> alt;
    if (config.route == "residue")
        result = branching_ratio_residue(p);
    else if (config.route == "time-domain" || config.route == "time_domain")
        result = branching_time_domain(p, config.step);
    else
        result = branching_ratio(p, config.quadrature);
    if (config.route == "both")
        alt = branching_time_domain(p, config.step);

    SweepTable table;
    table.metadata = params_metadata(config);
    table.metadata.emplace_back("degenerate_poles", poles.degenerate ? "true" : "false");
    table.columns = {"p_b", "p_c", "ratio", "err_b", "err_c", "err_ratio", "route"};
    std::vector<Cell> row = {result.p_b, result.p_c, result.ratio, result.err_b, result.err_c,
                             result.err_ratio, std::string(config.route == "both" ? "both" : to_string(result.route))};
    for (int k = 0; k < 4; ++k) {
        const std::string prefix = "pole" + std::to_string(k + 1);
        table.columns.push_back(prefix + "_re");
        table.columns.push_back(prefix + "_im");
        row.emplace_back(poles.poles[k].root.real());
        row.emplace_back(poles.poles[k].root.imag());
    }
    if (alt) {
        table.columns.insert(table.columns.end(), {"p_b_time", "p_c_time", "disagreement"});
        row.emplace_back(alt->p_b);
        row.emplace_back(alt->p_c);
        row.emplace_back(std::max(std::abs(result.p_b - alt->p_b), std::abs(result.p_c - alt->p_c)));
    }
    table.rows.push_back(std::move(row));

    if (config.format == "json") {
        json poles_json = json::array();
        for (const auto& pole : poles.poles)
            poles_json.push_back({{"re", pole.root.real()},
                                  {"im", pole.root.imag()},
                                  {"residue_re", pole.residue.real()},
                                  {"residue_im", pole.residue.imag()}});
        json res = {{"p_b", result.p_b},     {"p_c", result.p_c},     {"ratio", result.ratio},
                    {"err_b", result.err_b}, {"err_c", result.err_c}, {"err_ratio", result.err_ratio},
                    {"route", config.route == "both" ? std::string("both") : std::string(to_string(result.route))},
                    {"poles", poles_json},   {"degenerate_poles", poles.degenerate}};
        if (alt) {
            res["p_b_time"] = alt->p_b;
            res["p_c_time"] = alt->p_c;
            res["disagreement"] = std::max(std::abs(result.p_b - alt->p_b), std::abs(result.p_c - alt->p_c));
        }
        with_output(config, out, [&](std::ostream& os) {
            os << json{{"config", to_json(config)}, {"result", res}}.dump(2) << '\n';
        });
    }
    else {
        with_output(config, out, [&](std::ostream& os) { write_csv(table, os); });
    }
    return kOk;
}

int cmd_dynamics(const RunConfig& config, std::ostream& out)
{
    config.validate();
    const double t_max = config.t_max.value_or(auto_time_horizon(config.params, config.step));
    const Trajectory traj = evolve(config.params, t_max, config.step);

    SweepTable table;
    table.metadata = params_metadata(config);
    table.metadata.emplace_back("t_max", format_number(t_max));
    table.metadata.emplace_back("t_max_auto", config.t_max ? "false" : "true");
    table.metadata.emplace_back("step_rel_tol", format_number(config.step.rel_tol));
    table.metadata.emplace_back("step_abs_tol", format_number(config.step.abs_tol));
    table.columns = {"t",       "alpha_re", "alpha_im", "u_re",   "u_im",   "v_b_re", "v_b_im",
                     "v_c_re",  "v_c_im",   "alpha2",   "rho_bb", "rho_cc", "norm"};
    for (const auto& s : traj.samples) {
        const auto& x = s.state;
        table.rows.push_back({s.t, x.alpha.real(), x.alpha.imag(), x.u.real(), x.u.imag(), x.v_b.real(),
                              x.v_b.imag(), x.v_c.real(), x.v_c.imag(), std::norm(x.alpha), s.rho_b, s.rho_c,
                              x.norm()});
    }
    emit(config, table, out);
    return kOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out)
{
    config.validate();
    GridSpec spec;
    spec.axes = config.sweep->axes;
    spec.omega_bc = config.sweep->omega_bc;
    spec.quantity = config.sweep->quantity;
    spec.base = config.params;
    spec.quadrature = config.quadrature;
    spec.step = config.step;
    spec.metadata = {{"command", "sweep"}};
    emit(config, run_sweep(spec, sweep_route(config), worker_count(config)), out);
    return kOk;
}

int cmd_figure(const RunConfig& config, std::ostream& out)
{
    config.validate();
    const FigureConfig& fig = *config.figure;
    const int points = fig.points.value_or(201);

    if (fig.name == "fig3b") {
        const Range range = fig.range.value_or(Range{0.0, fig.t_max.value_or(10.0)});
        if (range.lo != 0.0)
            throw ValidationError("fig3b range must start at 0");
        Fig3bSpec spec = preset_fig3b(range.hi, points, fig.delta_b.value_or(2.0));
        spec.both.kappa = spec.single.kappa = config.params.kappa;
        spec.both.gamma_b = config.params.gamma_b;
        spec.both.gamma_c = spec.single.gamma_c = config.params.gamma_c;
        spec.step = config.step;
        emit(config, run_fig3b(spec), out);
        return kOk;
    }

    GridSpec spec;
    if (fig.name == "fig2") {
        spec = preset_fig2(fig.omega_bc.value_or(4.0), fig.range.value_or(Range{-10.0, 10.0}), points);
    }
    else if (fig.name == "fig3a") {
        spec = preset_fig3a(fig.range.value_or(Range{0.0, 5.0}), points);
    }
    else {
        const Range range = fig.range.value_or(Range{-10.0, 10.0});
        const auto g_values = fig.g_values.value_or(std::vector<double>{0.5, 1.0, 2.0});
        spec = fig.name == "fig4" ? preset_fig4(range, g_values, points) : preset_fig5(range, g_values, points);
    }
    spec.base.gamma_b = config.params.gamma_b;
    spec.base.gamma_c = config.params.gamma_c;
    spec.base.kappa = config.params.kappa;
    spec.quadrature = config.quadrature;
    spec.step = config.step;
    emit(config, run_sweep(spec, sweep_route(config), worker_count(config)), out);
    return kOk;
}

int cmd_selftest(std::ostream& out)
{
    const auto reports = run_suites(acceptance_suites(), default_routes(), out);
    const auto failed = std::find_if(reports.begin(), reports.end(),
                                     [](const SuiteReport& r) { return !r.outcome.passed; });
    if (failed != reports.end()) {
        out << "selftest FAILED: first failing property: " << failed->name << '\n';
        return kSelftestFailed;
    }
    out << "selftest passed: " << reports.size() << " suites\n";
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Branching ratios of a driven four-level emitter in a Lorentzian cavity vacuum"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_path, format, route, range_text, g_values_text;
    std::optional<double> gamma_b, gamma_c, delta_b, delta_c, drive_g, drive_detuning, kappa, omega_bc, t_max;
    std::optional<int> points, workers;
    std::vector<std::string> axis_texts;
    std::string figure_name;

    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Output file (default: standard output)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--route", route, "quadrature, time-domain, both (point also: residue)")
        ->check(CLI::IsMember({"quadrature", "time-domain", "time_domain", "both", "residue"}));
    app.add_option("--gamma-b", gamma_b, "Decay rate into |b>");
    app.add_option("--gamma-c", gamma_c, "Decay rate into |c>");
    app.add_option("--delta-b", delta_b, "Cavity detuning of a-b");
    app.add_option("--delta-c", delta_c, "Cavity detuning of a-c");
    app.add_option("--g", drive_g, "Drive coupling G (Rabi frequency 2G)");
    app.add_option("--delta", drive_detuning, "Drive detuning");
    app.add_option("--kappa", kappa, "Cavity half-width; other values are then absolute (default 1)");
    app.add_option("--omega-bc", omega_bc, "fig2: separation of |b> and |c>");
    app.add_option("--g-values", g_values_text, "fig4/fig5: comma-separated drive strengths");
    app.add_option("--range", range_text, "Preset scan range lo:hi (fig3b: 0:t_max)");
    app.add_option("--points", points, "Points per scan axis, or samples for dynamics");
    app.add_option("--t-max", t_max, "dynamics: final time (default: automatic)");
    app.add_option("--workers", workers, "Sweep worker threads (0: hardware concurrency)");

    auto* point = app.add_subcommand("point", "Branching ratio and poles at one parameter point");
    auto* dynamics = app.add_subcommand("dynamics", "Amplitude time series from the excited state");
    auto* sweep = app.add_subcommand("sweep", "Parameter grid from --axis flags or the config");
    sweep->add_option("--axis", axis_texts, "name=lo:hi:n or name=v1,v2,... (repeatable)");
    auto* figure = app.add_subcommand("figure", "Regenerate a figure data table");
    figure->add_option("name", figure_name, "fig2, fig3a, fig3b, fig4 or fig5");
    auto* selftest = app.add_subcommand("selftest", "Run the property suites");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    }
    catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (selftest->parsed())
            return cmd_selftest(out);

        std::string command;
        for (auto* sub : {point, dynamics, sweep, figure})
            if (sub->parsed())
                command = sub->get_name();

        RunConfig config;
        if (!config_path.empty()) {
            std::ifstream file(config_path);
            json doc;
            try {
                doc = json::parse(file);
            }
            catch (const json::exception& e) {
                throw ValidationError(std::string("cannot parse config: ") + e.what());
            }
            config = parse_run_config(doc);
            if (!config.command.empty() && config.command != command)
                throw ValidationError("config is for command '" + config.command + "', not '" + command + "'");
        }
        config.command = command;

        if (out_path)
            config.out = *out_path;
        if (format)
            config.format = *format;
        if (route)
            config.route = *route;
        if (workers)
            config.workers = *workers;
        if (gamma_b)
            config.params.gamma_b = *gamma_b;
        if (gamma_c)
            config.params.gamma_c = *gamma_c;
        if (delta_c)
            config.params.delta_c = *delta_c;
        if (drive_g)
            config.params.drive_g = *drive_g;
        if (drive_detuning)
            config.params.drive_detuning = *drive_detuning;
        if (kappa)
            config.params.kappa = *kappa;
        if (delta_b)
            config.params.delta_b = *delta_b;

        if (command == "dynamics") {
            if (t_max)
                config.t_max = *t_max;
            if (points)
                config.step.samples = *points;
        }
        if (command == "sweep" && !axis_texts.empty()) {
            if (!config.sweep)
                config.sweep = SweepConfig{};
            for (const auto& text : axis_texts)
                config.sweep->axes.push_back(parse_axis_text(text));
            if (omega_bc)
                config.sweep->omega_bc = *omega_bc;
        }
        if (command == "figure") {
            if (!config.figure)
                config.figure = FigureConfig{};
            if (!figure_name.empty())
                config.figure->name = figure_name;
            if (omega_bc)
                config.figure->omega_bc = *omega_bc;
            if (g_values_text)
                config.figure->g_values = parse_list(*g_values_text, "--g-values");
            if (range_text)
                config.figure->range = parse_range_text(*range_text);
            if (points)
                config.figure->points = *points;
            if (t_max)
                config.figure->t_max = *t_max;
            if (delta_b)
                config.figure->delta_b = *delta_b;
        }

        if (command == "point")
            return cmd_point(config, out);
        if (command == "dynamics")
            return cmd_dynamics(config, out);
        if (command == "sweep")
            return cmd_sweep(config, out);
        return cmd_figure(config, out);
    }
    catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInvalidInput;
    }
    catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

} // namespace cavbranch::cli

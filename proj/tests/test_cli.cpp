#include "cavbranch/cli.hpp"
#include "cavbranch/errors.hpp"
#include "cavbranch/model.hpp"
#include "cavbranch/selftest.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cavbranch;
using nlohmann::json;

namespace {

struct Invocation
{
    int code = -1;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "cavbranch");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    Invocation inv;
    inv.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    inv.out = out.str();
    inv.err = err.str();
    return inv;
}

struct Csv
{
    std::vector<std::string> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    double number(std::size_t row, const std::string& column) const
    {
        const auto it = std::find(header.begin(), header.end(), column);
        REQUIRE(it != header.end());
        return std::stod(rows.at(row).at(static_cast<std::size_t>(it - header.begin())));
    }
};

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

Csv parse_csv(const std::string& text)
{
    Csv csv;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("# ", 0) == 0)
            csv.metadata.push_back(line.substr(2));
        else if (csv.header.empty())
            csv.header = split(line);
        else
            csv.rows.push_back(split(line));
    }
    return csv;
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("cavbranch_test_" + name);
}

} // namespace

TEST_CASE("point: symmetric parameters")
{
    const auto inv = invoke({"point", "--delta-b", "2", "--delta-c", "-2", "--g", "1"});
    REQUIRE(inv.code == 0);
    const Csv csv = parse_csv(inv.out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(std::abs(csv.number(0, "ratio") - 1.0) < 1e-6);
    CHECK(csv.number(0, "pole4_re") <= csv.number(0, "pole1_re"));
    CHECK(std::find(csv.metadata.begin(), csv.metadata.end(), "drive_g=1") != csv.metadata.end());
}

TEST_CASE("point: invalid and failing inputs map to exit codes")
{
    auto inv = invoke({"point", "--kappa", "0"});
    CHECK(inv.code == 2);
    CHECK(inv.err.find("kappa") != std::string::npos);

    const auto path = temp_file("kappa0.json");
    std::ofstream(path) << R"({"command": "point", "params": {"kappa": 0}})";
    inv = invoke({"point", "--config", path.string()});
    CHECK(inv.code == 2);
    CHECK(inv.err.find("kappa must be > 0") != std::string::npos);

    inv = invoke({"point", "--gamma-c", "0"});
    CHECK(inv.code == 3);
    CHECK(inv.err.find("ratio undefined") != std::string::npos);

    CHECK(invoke({"point", "--g", "abc"}).code == 2);
    CHECK(invoke({"point", "--format", "xml"}).code == 2);
    CHECK(invoke({}).code == 2);
}

TEST_CASE("point: both routes")
{
    const auto inv = invoke({"point", "--route", "both", "--g", "2", "--delta", "2", "--delta-b", "2",
                             "--delta-c", "-2", "--format", "json"});
    REQUIRE(inv.code == 0);
    const json doc = json::parse(inv.out);
    CHECK(doc["result"]["disagreement"].get<double>() < 1e-5);
    CHECK(doc["result"]["poles"].size() == 4);
    CHECK(doc["config"]["params"]["drive_g"] == 2.0);
}

TEST_CASE("point: residue route")
{
    const auto inv = invoke({"point", "--route", "residue", "--gamma-b", "2", "--delta-b", "1", "--delta-c", "1"});
    REQUIRE(inv.code == 0);
    const Csv csv = parse_csv(inv.out);
    CHECK(std::abs(csv.number(0, "ratio") - 2.0) < 1e-9);
    CHECK(csv.rows[0][csv.header.size() - 9] == "residue");
}

TEST_CASE("dynamics: automatic horizon and probability balance")
{
    const auto inv = invoke({"dynamics", "--g", "1", "--delta", "2", "--delta-b", "2", "--delta-c", "-2"});
    REQUIRE(inv.code == 0);
    const Csv csv = parse_csv(inv.out);
    REQUIRE(csv.rows.size() > 10);
    CHECK(csv.header.size() == 13);
    CHECK(csv.number(0, "t") == 0.0);
    CHECK(csv.number(0, "alpha2") == 1.0);
    CHECK(csv.number(csv.rows.size() - 1, "norm") < 1e-6);
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
        CHECK(std::abs(csv.number(i, "norm") + csv.number(i, "rho_bb") + csv.number(i, "rho_cc") - 1.0) < 1e-7);
}

TEST_CASE("dynamics: fixed horizon and sample count")
{
    const auto inv = invoke({"dynamics", "--gamma-b", "0", "--gamma-c", "0", "--g", "1", "--t-max", "3",
                             "--points", "31"});
    REQUIRE(inv.code == 0);
    const Csv csv = parse_csv(inv.out);
    REQUIRE(csv.rows.size() == 31);
    CHECK(std::abs(csv.number(30, "alpha2") - std::pow(std::cos(3.0), 2)) < 1e-8);
}

TEST_CASE("sweep from axis flags")
{
    const auto inv = invoke({"sweep", "--axis", "gamma_b=0.5:2:3", "--axis", "delta_b=-1,0,1,2,3", "--workers", "2"});
    REQUIRE(inv.code == 0);
    const Csv csv = parse_csv(inv.out);
    CHECK(csv.rows.size() == 15);
    CHECK(csv.header[0] == "gamma_b");
    CHECK(invoke({"sweep", "--axis", "gamma_b="}).code == 2);
    CHECK(invoke({"sweep"}).code == 2);
}

TEST_CASE("figure presets")
{
    auto inv = invoke({"figure", "fig4"});
    REQUIRE(inv.code == 0);
    Csv csv = parse_csv(inv.out);
    CHECK(csv.rows.size() == 603);
    CHECK(std::find(csv.metadata.begin(), csv.metadata.end(), "caption_fixed=delta_b = -delta_c = 2.0") !=
          csv.metadata.end());

    inv = invoke({"figure", "fig2", "--omega-bc", "6", "--points", "11"});
    REQUIRE(inv.code == 0);
    csv = parse_csv(inv.out);
    CHECK(std::find(csv.metadata.begin(), csv.metadata.end(), "omega_bc=6") != csv.metadata.end());
    CHECK(csv.rows.size() == 11);

    inv = invoke({"figure", "fig3a", "--points", "21"});
    REQUIRE(inv.code == 0);
    csv = parse_csv(inv.out);
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
        CHECK(std::abs(csv.number(i, "p_b") + csv.number(i, "p_c") - 1.0) < 1e-6);

    inv = invoke({"figure", "fig3b", "--delta-b", "-2", "--range", "0:2", "--points", "5"});
    REQUIRE(inv.code == 0);
    csv = parse_csv(inv.out);
    CHECK(csv.rows.size() == 5);
    CHECK(csv.number(4, "t") == 2.0);
    CHECK(std::find(csv.metadata.begin(), csv.metadata.end(), "delta_b_assumed=-2") != csv.metadata.end());

    inv = invoke({"figure", "fig4", "--g-values", "1,3", "--range", "-2:2", "--points", "5"});
    REQUIRE(inv.code == 0);
    CHECK(parse_csv(inv.out).rows.size() == 10);
}

TEST_CASE("unknown figure lists the valid names")
{
    const auto inv = invoke({"figure", "fig6"});
    CHECK(inv.code == 2);
    for (const auto& name : cli::figure_names())
        CHECK(inv.err.find(name) != std::string::npos);
}

TEST_CASE("output file and byte-identical reruns")
{
    const auto path = temp_file("fig3a.csv");
    REQUIRE(invoke({"figure", "fig3a", "--points", "9", "--out", path.string()}).code == 0);
    std::ifstream in(path);
    const std::string first((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto again = invoke({"figure", "fig3a", "--points", "9", "--workers", "3"});
    CHECK(again.out == first);
}

TEST_CASE("config precedence: flags over file over defaults")
{
    const auto path = temp_file("point.json");
    std::ofstream(path) << R"({"command": "point", "params": {"gamma_b": 2, "delta_b": 1.5}, "route": "residue"})";
    const auto inv = invoke({"point", "--config", path.string(), "--gamma-b", "3", "--format", "json"});
    REQUIRE(inv.code == 0);
    const json doc = json::parse(inv.out);
    CHECK(doc["config"]["params"]["gamma_b"] == 3.0);
    CHECK(doc["config"]["params"]["delta_b"] == 1.5);
    CHECK(doc["config"]["params"]["gamma_c"] == 1.0);
    CHECK(doc["config"]["route"] == "residue");

    CHECK(invoke({"sweep", "--config", path.string()}).code == 2);
}

TEST_CASE("config schema is strict")
{
    CHECK_THROWS_AS(cli::parse_run_config(json{{"command", "point"}, {"colour", 1}}), ValidationError);
    CHECK_THROWS_AS(cli::parse_run_config(json{{"params", {{"gamma_d", 1}}}}), ValidationError);
    CHECK_THROWS_AS(cli::parse_run_config(json{{"params", {{"gamma_b", "one"}}}}), ValidationError);

    cli::RunConfig c;
    c.command = "point";
    c.sweep = cli::SweepConfig{};
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.command = "sweep";
    CHECK_NOTHROW(c.validate());
    c.route = "residue";
    CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("JSON output round-trips through config parsing")
{
    const auto inv = invoke({"point", "--g", "1.25", "--delta", "-0.5", "--gamma-c", "0.3", "--format", "json"});
    REQUIRE(inv.code == 0);
    const cli::RunConfig c = cli::parse_run_config(json::parse(inv.out));
    CHECK(c.command == "point");
    CHECK(c.params == SystemParams{1, 0.3, 0, 0, 1.25, -0.5, 1});
    CHECK(cli::to_json(c) == json::parse(inv.out)["config"]);

    cli::RunConfig s;
    s.command = "figure";
    s.figure = cli::FigureConfig{"fig4", std::nullopt, std::vector<double>{1, 2}, Range{-3, 3}, 7, std::nullopt,
                                 std::nullopt};
    s.workers = 2;
    const json j = cli::to_json(s);
    CHECK(cli::to_json(cli::parse_run_config(j)) == j);

    cli::RunConfig w;
    w.command = "sweep";
    w.sweep = cli::SweepConfig{{{"drive_g", {0, 1}}, {"cavity_detuning", {-1, 1}}}, 4.0, SweepQuantity::normalized};
    const json k = cli::to_json(w);
    CHECK(cli::to_json(cli::parse_run_config(k)) == k);
}

TEST_CASE("sweep config with range axes")
{
    const auto path = temp_file("sweep.json");
    std::ofstream(path) << R"({"command": "sweep",
        "params": {"delta_b": 2, "delta_c": -2, "drive_detuning": 2},
        "sweep": {"axes": [{"name": "g", "range": [0, 2], "points": 3}]}})";
    const auto inv = invoke({"sweep", "--config", path.string()});
    REQUIRE(inv.code == 0);
    const Csv csv = parse_csv(inv.out);
    CHECK(csv.rows.size() == 3);
    CHECK(csv.header[0] == "drive_g");
    CHECK(std::abs(csv.number(0, "ratio") - 1.0) < 1e-6);
}

namespace {

// Flips the sign of the drive detuning inside the resolvent.
cplx flipped_detuning(cplx z, const SystemParams& p)
{
    SystemParams q = p;
    q.drive_detuning = -p.drive_detuning;
    return resolvent(z, q);
}

// Flips the sign of the whole drive self-energy term.
cplx flipped_drive_term(cplx z, const SystemParams& p)
{
    const double g2 = p.drive_g * p.drive_g;
    const cplx i{0.0, 1.0};
    cplx d = z - g2 / (z + i * p.drive_detuning);
    d += p.kappa * p.gamma_b / (z + p.kappa - i * p.delta_b);
    d += p.kappa * p.gamma_c / (z + p.kappa - i * p.delta_c);
    return 1.0 / d;
}

SuiteOutcome run_named(const std::string& name, const Routes& routes)
{
    for (const auto& suite : acceptance_suites())
        if (suite.name == name)
            return suite.run(routes);
    FAIL("no suite " << name);
    return {};
}

} // namespace

TEST_CASE("suites catch injected resolvent errors")
{
    CHECK(run_named("symmetric_case", default_routes()).passed);
    CHECK_FALSE(run_named("symmetric_case", routes_with_resolvent(flipped_drive_term)).passed);
    CHECK_FALSE(run_named("route_equivalence", routes_with_resolvent(flipped_detuning)).passed);
}

TEST_CASE("suite names are listed in criterion order")
{
    const auto suites = acceptance_suites();
    REQUIRE(suites.size() == 11);
    CHECK(suites.front().name == "symmetric_case");
    CHECK(suites.back().name == "determinism");
}

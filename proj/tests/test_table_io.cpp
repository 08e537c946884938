#include "cavbranch/table_io.hpp"

#include <doctest.h>

#include <limits>

using namespace cavbranch;

TEST_CASE("numbers use 12 significant digits")
{
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.1 + 0.2) == "0.3");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV layout and quoting")
{
    SweepTable t;
    t.metadata = {{"figure", "fig4"}, {"units", "kappa"}};
    t.columns = {"x", "note"};
    t.rows = {{0.5, std::string("plain")}, {2.0, std::string("a, \"b\"")}};
    CHECK(to_csv(t) == "# figure=fig4\n# units=kappa\nx,note\n0.5,plain\n2,\"a, \"\"b\"\"\"\n");
}

TEST_CASE("JSON tables keep metadata and map non-finite values to null")
{
    SweepTable t;
    t.metadata = {{"omega_bc", "6"}};
    t.columns = {"ratio", "error"};
    t.rows = {{std::numeric_limits<double>::quiet_NaN(), std::string("ratio undefined")}, {1.5, std::string()}};
    const auto j = to_json(t);
    CHECK(j["metadata"]["omega_bc"] == "6");
    CHECK(j["columns"][1] == "error");
    CHECK(j["rows"][0][0].is_null());
    CHECK(j["rows"][0][1] == "ratio undefined");
    CHECK(j["rows"][1][0] == 1.5);
}

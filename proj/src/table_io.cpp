#include "cavbranch/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace cavbranch {

namespace {

std::string quote_field(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& cell)
{
    if (const auto* v = std::get_if<double>(&cell))
        return format_number(*v);
    return quote_field(std::get<std::string>(cell));
}

} // namespace

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (value == 0.0)
        value = 0.0; // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_csv(const SweepTable& table, std::ostream& out)
{
    for (const auto& [key, value] : table.metadata)
        out << "# " << key << '=' << value << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << quote_field(table.columns[i]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << cell_text(row[i]);
        out << '\n';
    }
}

std::string to_csv(const SweepTable& table)
{
    std::ostringstream os;
    write_csv(table, os);
    return os.str();
}

nlohmann::json to_json(const SweepTable& table)
{
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [key, value] : table.metadata)
        meta[key] = value;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& cell : row) {
            if (const auto* v = std::get_if<double>(&cell))
                r.push_back(std::isfinite(*v) ? nlohmann::json(*v) : nlohmann::json(nullptr));
            else
                r.push_back(std::get<std::string>(cell));
        }
        rows.push_back(std::move(r));
    }
    return {{"metadata", meta}, {"columns", table.columns}, {"rows", rows}};
}

} // namespace cavbranch

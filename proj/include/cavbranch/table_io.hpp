#pragma once

#include "cavbranch/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace cavbranch {

// printf "%.12g"; non-finite values print as nan / inf / -inf.
std::string format_number(double value);

// Metadata as "# key=value" lines, then a header row and one row per grid point.
// Fields holding a comma, quote or line break are quoted RFC-4180 style.
void write_csv(const SweepTable& table, std::ostream& out);
std::string to_csv(const SweepTable& table);

// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}; non-finite numbers become null.
nlohmann::json to_json(const SweepTable& table);

} // namespace cavbranch

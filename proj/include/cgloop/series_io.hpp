#pragma once

#include "cgloop/series.hpp"

#include <json.hpp>

#include <string>

namespace cgloop {

/// "%.17g": enough digits for a double to round-trip.
std::string format_double(double x);

/// {"backend", "cutoff", "terms": [{"exponent", "coefficient"}]}. Exact
/// values are "p/q" strings, floating values are JSON numbers.
nlohmann::json to_json(const GenSeries& s);
GenSeries series_from_json(const nlohmann::json& j);

/// Header "exponent,coefficient", one row per stored term.
std::string to_csv(const GenSeries& s);

} // namespace cgloop

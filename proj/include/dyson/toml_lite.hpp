#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace dyson::toml {

/// Parses the TOML subset used by scenario files into a JSON object:
/// tables, arrays of tables, dotted keys, basic and literal strings,
/// integers, floats, booleans, arrays and inline tables. Dates and
/// multi-line strings are not supported. Throws ConfigError with the line
/// number on malformed input.
nlohmann::json parse(std::string_view text);
nlohmann::json parse_file(const std::string& path);

}  // namespace dyson::toml

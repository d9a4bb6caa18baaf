#pragma once
// Deterministic text output: JSON with sorted keys and 17 significant digits.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

namespace lieexp::io {

void write_json(const nlohmann::json& j, std::ostream& out, int indent = 2);
std::string dump_json(const nlohmann::json& j, int indent = 2);
/// %.17g
std::string format_double(double x);

}  // namespace lieexp::io

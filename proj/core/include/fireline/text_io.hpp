#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fireline {

// Shortest-round-trip is not enough for diffable outputs; every float column
// uses 17 significant digits.
std::string format_double(double value);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);
double parse_double(std::string_view field);
long long parse_int(std::string_view field);

}  // namespace fireline

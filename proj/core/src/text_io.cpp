#include "fireline/text_io.hpp"

#include <charconv>
#include <fmt/format.h>

#include "fireline/errors.hpp"

namespace fireline {

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ConfigError(fmt::format("not a number: '{}'", field));
  }
  return value;
}

long long parse_int(std::string_view field) {
  field = trim(field);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ConfigError(fmt::format("not an integer: '{}'", field));
  }
  return value;
}

}  // namespace fireline

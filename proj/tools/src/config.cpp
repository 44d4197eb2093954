#include "fireline_cli/config.hpp"

#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "fireline/errors.hpp"
#include "fireline/text_io.hpp"

namespace fireline::cli {

Config Config::parse(std::istream& in, const std::string& source) {
  Config config;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected key = value, got '{}'", source, number, body));
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", source, number));
    config.values_[std::string(key)].emplace_back(value);
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read config '{}'", path.string()));
  return parse(in, path.string());
}

const std::string& Config::single(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(fmt::format("missing required key '{}'", key));
  if (it->second.size() != 1) {
    throw ConfigError(fmt::format("key '{}' given {} times but takes one value", key, it->second.size()));
  }
  return it->second.front();
}

std::string Config::text(const std::string& key) const { return single(key); }

std::string Config::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? single(key) : fallback;
}

double Config::number(const std::string& key) const {
  try {
    return parse_double(single(key));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("key '{}': {}", key, e.what()));
  }
}

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long Config::integer(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  try {
    return parse_int(single(key));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("key '{}': {}", key, e.what()));
  }
}

std::uint64_t Config::seed() const {
  const long long s = integer("seed", 1);
  if (s < 0) throw ConfigError(fmt::format("seed must be non-negative, got {}", s));
  return static_cast<std::uint64_t>(s);
}

std::vector<std::string> Config::texts(const std::string& key) const {
  std::vector<std::string> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  for (const auto& v : it->second) {
    for (auto part : split(v, ',')) {
      part = trim(part);
      if (!part.empty()) out.emplace_back(part);
    }
  }
  return out;
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& v : texts(key)) {
    try {
      out.push_back(parse_double(v));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("key '{}': {}", key, e.what()));
    }
  }
  return out;
}

void Config::require_known(const std::set<std::string>& known) const {
  for (const auto& [key, _] : values_) {
    if (known.count(key) == 0) throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, list] : values_) {
    for (const auto& v : list) out += key + '=' + v + '\n';
  }
  return out;
}

}  // namespace fireline::cli

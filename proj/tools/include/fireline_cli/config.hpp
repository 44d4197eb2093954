#pragma once

// Flat `key = value` experiment configs. A key may repeat to form a list;
// `#` starts a comment. Values are kept as text in file order.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fireline::cli {

class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  // IoError when the file cannot be read.
  static Config load(const std::filesystem::path& path);

  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

  // Scalars: ConfigError when missing (no default) or given more than once.
  [[nodiscard]] std::string text(const std::string& key) const;
  [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] double number(const std::string& key, double fallback) const;
  [[nodiscard]] long long integer(const std::string& key, long long fallback) const;
  [[nodiscard]] std::uint64_t seed() const;

  // Lists: every occurrence, in order. A value may also hold a comma list.
  [[nodiscard]] std::vector<std::string> texts(const std::string& key) const;
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values_[key] = {value}; }

  // ConfigError naming the first key not in `known`.
  void require_known(const std::set<std::string>& known) const;

  // Keys sorted, list order kept; the input of the config hash.
  [[nodiscard]] std::string canonical() const;

 private:
  const std::string& single(const std::string& key) const;

  std::map<std::string, std::vector<std::string>> values_;
};

}  // namespace fireline::cli

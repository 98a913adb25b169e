#pragma once

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tfpm/errors.hpp"

namespace tfpm {

/// Flat `key = value` configuration with '#' comments.  Keys may carry dotted
/// paths (initial.type, decay.alphas).  Typed accessors raise ConfigError with
/// the offending key path.
class Config {
public:
  static Config from_string(std::string_view text) {
    Config cfg;
    std::string line;
    std::istringstream in{std::string(text)};
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno),
                          "expected `key = value`, got '" + trimmed + "'");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
      if (cfg.entries_.count(key)) throw ConfigError(key, "duplicate key");
      cfg.entries_[key] = value;
    }
    return cfg;
  }

  static Config from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string str(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(key, "missing required key");
    return it->second;
  }

  std::string str_or(const std::string& key, std::string fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? std::move(fallback) : it->second;
  }

  double number(const std::string& key) const { return parse_number(key, str(key)); }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) const {
    const double v = number(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ConfigError(key, "expected an integer");
    return i;
  }

  int integer_or(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::vector<double> number_list(const std::string& key) const {
    const std::string raw = str(key);
    std::vector<double> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) throw ConfigError(key, "empty list element");
      out.push_back(parse_number(key, t));
    }
    if (out.empty()) throw ConfigError(key, "expected a comma-separated list");
    return out;
  }

  /// All entries, sorted by key (used for the run manifest).
  const std::map<std::string, std::string>& entries() const { return entries_; }

  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

private:
  static std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
  }

  static double parse_number(const std::string& key, const std::string& text) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(key, "expected a number, got '" + text + "'");
    return v;
  }

  std::map<std::string, std::string> entries_;
};

}  // namespace tfpm

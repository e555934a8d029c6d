#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace deadcore {

/// Flat "key = value" text with [section] headers; '#' and ';' start
/// comments. Keys outside any section live in section "". Every key must be
/// consumed by a getter before check_consumed(), which rejects the rest.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;
  std::optional<double> get_optional_double(const std::string& section, const std::string& key) const;

  /// Throws ConfigError naming every key no getter asked for.
  void check_consumed() const;

 private:
  const std::string* raw(const std::string& section, const std::string& key) const;

  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> data_;
  std::map<std::string, std::map<std::string, int>> lines_;
  mutable std::set<std::pair<std::string, std::string>> used_;
};

}  // namespace deadcore

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "deadcore/analysis.hpp"

namespace deadcore {

/// Ordered flat record of one run. Rendered as "key = value" lines or as a
/// single JSON object.
class Report {
 public:
  using Value = std::variant<double, long long, bool, std::string>;

  void set(const std::string& key, double v) { put(key, v); }
  void set(const std::string& key, int v) { put(key, static_cast<long long>(v)); }
  void set(const std::string& key, long long v) { put(key, v); }
  void set(const std::string& key, std::size_t v) { put(key, static_cast<long long>(v)); }
  void set(const std::string& key, bool v) { put(key, v); }
  void set(const std::string& key, const std::string& v) { put(key, v); }
  void set(const std::string& key, const char* v) { put(key, std::string(v)); }

  const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }
  const Value* find(const std::string& key) const;

  std::string to_text() const;
  std::string to_json() const;
  /// Writes <stem>.txt and <stem>.json.
  void write(const std::string& stem) const;

 private:
  void put(const std::string& key, Value v);
  std::vector<std::pair<std::string, Value>> entries_;
};

/// Free boundary summary with the fixed field names fitted_exponent,
/// fitted_constant, r_squared, density_min_ratio, porosity_tau.
Report free_boundary_record(const FreeBoundaryReport& rep);

}  // namespace deadcore

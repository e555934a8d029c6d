#include "deadcore/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "deadcore/errors.hpp"

namespace deadcore {

namespace {

std::string number(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + path);
  f << text;
}

}  // namespace

void Report::put(const std::string& key, Value v) {
  for (auto& e : entries_)
    if (e.first == key) {
      e.second = std::move(v);
      return;
    }
  entries_.emplace_back(key, std::move(v));
}

const Report::Value* Report::find(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.first == key) return &e.second;
  return nullptr;
}

std::string Report::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k + " = ";
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>) out += number(x);
          else if constexpr (std::is_same_v<T, bool>) out += x ? "true" : "false";
          else if constexpr (std::is_same_v<T, long long>) out += std::to_string(x);
          else out += x;
        },
        v);
    out += '\n';
  }
  return out;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : entries_) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>) {
            if (std::isfinite(x)) j[k] = x;
            else j[k] = nullptr;
          } else {
            j[k] = x;
          }
        },
        v);
  }
  return j.dump(2) + "\n";
}

void Report::write(const std::string& stem) const {
  write_file(stem + ".txt", to_text());
  write_file(stem + ".json", to_json());
}

Report free_boundary_record(const FreeBoundaryReport& rep) {
  Report r;
  r.set("fitted_exponent", rep.fitted_exponent);
  r.set("fitted_constant", rep.fitted_constant);
  r.set("r_squared", rep.r_squared);
  r.set("density_min_ratio", rep.density_min_ratio);
  r.set("porosity_tau", rep.porosity_radius_fraction);
  r.set("expected_exponent", rep.expected_exponent);
  r.set("fit_r_min", rep.fit_window.first);
  r.set("fit_r_max", rep.fit_window.second);
  r.set("fb_points", rep.fb_points.size());
  r.set("probe_x", rep.x0[0]);
  r.set("probe_y", rep.x0[1]);
  r.set("nondegeneracy_min_ratio", rep.nondegeneracy_min_ratio);
  return r;
}

}  // namespace deadcore

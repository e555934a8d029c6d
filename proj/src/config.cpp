#include "deadcore/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "deadcore/errors.hpp"

namespace deadcore {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  // Accept simple fractions such as 1/36.
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const double a = to_double(trim(s.substr(0, slash)), where);
    const double b = to_double(trim(s.substr(slash + 1)), where);
    if (b == 0.0) throw ConfigError(where + ": division by zero in '" + s + "'");
    return a / b;
  }
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last || s.empty()) throw ConfigError(where + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      c.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (c.data_[section].count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    c.data_[section][key] = val;
    c.lines_[section][key] = no;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const { return raw(section, key) != nullptr; }

bool Config::has_section(const std::string& section) const { return data_.count(section) > 0; }

const std::string* Config::raw(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  used_.insert({section, key});
  return &k->second;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const std::string* v = raw(section, key);
  return v ? to_double(*v, origin_ + " [" + section + "] " + key) : fallback;
}

std::optional<double> Config::get_optional_double(const std::string& section, const std::string& key) const {
  const std::string* v = raw(section, key);
  if (!v || *v == "auto") return std::nullopt;
  return to_double(*v, origin_ + " [" + section + "] " + key);
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  const std::string* v = raw(section, key);
  if (!v) return fallback;
  int out = 0;
  auto r = std::from_chars(v->data(), v->data() + v->size(), out);
  if (r.ec != std::errc() || r.ptr != v->data() + v->size() || v->empty()) {
    throw ConfigError(origin_ + " [" + section + "] " + key + ": not an integer: '" + *v + "'");
  }
  return out;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const std::string* v = raw(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError(origin_ + " [" + section + "] " + key + ": not a boolean: '" + *v + "'");
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const std::string* v = raw(section, key);
  return v ? *v : fallback;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  const std::string* v = raw(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), origin_ + " [" + section + "] " + key));
  return out;
}

void Config::check_consumed() const {
  std::string unknown;
  for (const auto& [sec, keys] : data_)
    for (const auto& [k, v] : keys)
      if (!used_.count({sec, k})) {
        if (!unknown.empty()) unknown += ", ";
        unknown += (sec.empty() ? "" : "[" + sec + "] ") + k + " (line " + std::to_string(lines_.at(sec).at(k)) + ")";
      }
  if (!unknown.empty()) throw ConfigError(origin_ + ": unknown keys: " + unknown);
}

}  // namespace deadcore

// io.cpp -- CSV writing and summary.json schema enforcement.

#include "qsas/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qsas/error.hpp"

namespace qsas::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Integers print exactly; everything else gets a round-trip precision.
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  // Shortest decimal string that parses back to exactly v.
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path);
  if (!f) throw Error("write_csv: cannot open " + path);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) f << ',';
    f << header[i];
  }
  f << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw ShapeError("write_csv: row width differs from header width");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) f << ',';
      f << format_double(row[i]);
    }
    f << '\n';
  }
  if (!f.good()) throw Error("write_csv: write failed for " + path);
}

void validate_summary(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("summary: not a JSON object");
  const std::vector<std::pair<std::string, std::string>> required = {
      {"command", "string"}, {"verdict", "string"}, {"seed", "number"},
      {"jobs", "number"},    {"outputs", "array"},  {"details", "object"},
  };
  for (const auto& [key, type] : required) {
    if (!j.contains(key)) throw ConfigError("summary: missing field '" + key + "'");
    const auto& v = j.at(key);
    const bool ok = (type == "string" && v.is_string()) ||
                    (type == "number" && v.is_number()) ||
                    (type == "array" && v.is_array()) ||
                    (type == "object" && v.is_object());
    if (!ok) throw ConfigError("summary: field '" + key + "' must be a " + type);
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const auto& [key, type] : required) known = known || key == it.key();
    if (!known) throw ConfigError("summary: unknown field '" + it.key() + "'");
  }
  for (const auto& entry : j.at("outputs"))
    if (!entry.is_string())
      throw ConfigError("summary: outputs entries must be strings");
  const std::string verdict = j.at("verdict").get<std::string>();
  if (verdict != "pass" && verdict != "fail" && verdict != "n/a")
    throw ConfigError("summary: verdict must be pass|fail|n/a");
}

std::string write_summary(const std::string& dir, const nlohmann::json& summary) {
  validate_summary(summary);
  const std::string path = dir + "/summary.json";
  std::ofstream f(path);
  if (!f) throw Error("write_summary: cannot open " + path);
  f << summary.dump(2) << '\n';
  if (!f.good()) throw Error("write_summary: write failed for " + path);
  return path;
}

} // namespace qsas::io

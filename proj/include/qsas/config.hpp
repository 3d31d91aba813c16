// config.hpp -- plain-text run configuration.
//
// Format: INI-style sections of key = value lines; '#' or ';' start a
// comment; keys and section names are case-sensitive.  Unknown sections or
// keys are rejected so typos surface as errors instead of silently falling
// back to defaults.  Example:
//
//   [model]
//   family = reset-rotation   # reset-depolarizing | lindblad |
//   eps    = 0.5              # hadamard-damping | dephasing-reset |
//   g      = 1.0              # rotation-only | constant-reset
//
//   [domain]
//   lo = 0.0
//   hi = 6.283185307179586
//
//   [run]
//   seed = 12345
//   tol  = 1e-8
//   out  = results
//
// Sections [grid], [task], [search], [preimage], [fig1], [fig2] tune the
// individual subcommands; every key has a default, so an empty or missing
// config is valid for every command.

#ifndef QSAS_CONFIG_HPP
#define QSAS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsas/families.hpp"
#include "qsas/tasks.hpp"

namespace qsas {

struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static ConfigFile parse_string(const std::string& text);
  static ConfigFile parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
};

// Fully resolved run parameters: the model bundle plus every knob any
// subcommand consumes.  Construction validates all keys.
struct RunConfig {
  std::optional<ModelBundle> model; // absent -> per-command default family

  int grid_points = 101; // z-grid resolution for scans
  int x_samples = 20;    // reachable-set sample count
  double tol = 1e-8;
  std::uint64_t seed = 12345;
  std::string out_dir = ".";
  int jobs = 0; // 0 = all cores, 1 = fully serial reference path

  TaskConfig task; // [task]

  // [fig1]
  double gamma_lo = 0.02, gamma_hi = 2.0;
  double z_lo = -2.0, z_hi = 2.0;
  int gamma_points = 101, z_points = 101;
  double dtau = 1.0;
  bool quadratic = false;

  // [fig2]
  std::vector<double> eps_list = {0.2, 0.5, 0.8};
  std::vector<double> g_grid; // empty -> default_g_grid()

  // [search] (counterexample)
  int trials = 1000;
  double tol_in = 0.5;
  double tol_out = 1e-8;
  int seq_len = 64;
  double pair_offset = 1.0; // second sequence = first + offset

  // [preimage]
  double preimage_z0 = 0.0; // target x0 = fixed point at this input

  static RunConfig defaults();
  static RunConfig from_string(const std::string& text);
  static RunConfig from_file(const std::string& path);
};

// Parse "a,b,c" into numbers; throws ConfigError on malformed entries.
std::vector<double> parse_double_list(const std::string& text);

} // namespace qsas

#endif // QSAS_CONFIG_HPP

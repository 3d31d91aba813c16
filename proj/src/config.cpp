// config.cpp -- INI parsing and run-configuration resolution.

#include "qsas/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qsas/error.hpp"

namespace qsas {

//============================================================================
// Low-level parsing
//============================================================================

static std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cf;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": empty section name");
      cf.sections[section]; // section may legitimately stay empty
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside any [section]");
    auto& sec = cf.sections[section];
    if (sec.count(key))
      throw ConfigError("config: duplicate key '" + section + "." + key + "'");
    sec[key] = value;
  }
  return cf;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_string(buf.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections.find(section);
  return it != sections.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get_str(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
  const auto it = sections.find(section);
  if (it == sections.end()) return fallback;
  const auto jt = it->second.find(key);
  return jt == it->second.end() ? fallback : jt->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string s = get_str(section, key, "");
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + section + "." + key + "' is not a number: " + s);
  }
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) const {
  const double v = get_double(section, key, double(fallback));
  const int i = static_cast<int>(v);
  if (double(i) != v)
    throw ConfigError("config: '" + section + "." + key + "' is not an integer");
  return i;
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string s = get_str(section, key, "");
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + section + "." + key +
                      "' is not an unsigned integer: " + s);
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string s = get_str(section, key, "");
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config: '" + section + "." + key + "' is not a boolean: " + s);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: empty entry in list '" + text + "'");
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("config: list entry is not a number: " + item);
    }
  }
  if (out.empty()) throw ConfigError("config: empty list");
  return out;
}

//============================================================================
// Key whitelists
//============================================================================

namespace {

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"model", {"family", "eps", "g", "lambda", "theta", "gamma", "dtau", "quadratic"}},
    {"domain", {"lo", "hi"}},
    {"grid", {"points", "x_samples"}},
    {"run", {"seed", "tol", "out", "jobs"}},
    {"task", {"washout", "n_train", "n_test", "lambda", "realizations"}},
    {"search", {"trials", "tol_in", "tol_out", "seq_len", "offset"}},
    {"preimage", {"z0"}},
    {"fig1",
     {"gamma_lo", "gamma_hi", "z_lo", "z_hi", "gamma_points", "z_points", "dtau",
      "quadratic"}},
    {"fig2", {"eps_list", "g_grid"}},
};

void reject_unknown_keys(const ConfigFile& cf) {
  for (const auto& [section, kv] : cf.sections) {
    const auto it = kKnownKeys.find(section);
    if (it == kKnownKeys.end())
      throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : kv) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw ConfigError("config: unknown key '" + section + "." + key + "'");
    }
  }
}

// [domain] when present, otherwise the family's natural default.
InputDomain domain_or(const ConfigFile& cf, double def_lo, double def_hi) {
  const double dlo = cf.get_double("domain", "lo", def_lo);
  const double dhi = cf.get_double("domain", "hi", def_hi);
  if (!(dlo < dhi)) throw ConfigError("config: domain.lo must be < domain.hi");
  return InputDomain::interval(dlo, dhi);
}

ModelBundle build_model(const ConfigFile& cf, const std::string& family) {
  try {
    if (family == "reset-rotation")
      return make_reset_rotation(cf.get_double("model", "eps", 0.5),
                                 cf.get_double("model", "g", 1.0),
                                 domain_or(cf, 0.0, 2.0 * M_PI));
    if (family == "reset-depolarizing")
      return make_reset_depolarizing(cf.get_double("model", "eps", 0.5),
                                     domain_or(cf, 0.0, 1.0));
    if (family == "lindblad")
      return make_lindblad(cf.get_double("model", "gamma", 1.0),
                           cf.get_double("model", "dtau", 1.0),
                           cf.get_bool("model", "quadratic", false),
                           domain_or(cf, -2.0, 2.0));
    if (family == "hadamard-damping")
      return make_hadamard_damping(cf.get_double("model", "theta", M_PI / 3.0),
                                   domain_or(cf, 0.0, 2.0 * M_PI));
    if (family == "dephasing-reset")
      return make_dephasing_reset(cf.get_double("model", "eps", 0.5),
                                  cf.get_double("model", "lambda", 0.5),
                                  domain_or(cf, 0.0, 2.0 * M_PI));
    if (family == "rotation-only")
      return make_rotation_only(cf.get_double("model", "g", 1.0),
                                domain_or(cf, 0.0, 2.0 * M_PI));
    if (family == "constant-reset")
      return make_constant_reset(cf.get_double("model", "eps", 0.5),
                                 domain_or(cf, 0.0, 2.0 * M_PI));
  } catch (const DomainError& e) {
    // Parameter rejected by the family constructor: a configuration error.
    throw ConfigError(std::string("config: ") + e.what());
  }
  throw ConfigError("config: unknown model.family '" + family + "'");
}

} // namespace

//============================================================================
// RunConfig
//============================================================================

RunConfig RunConfig::defaults() { return RunConfig{}; }

RunConfig RunConfig::from_string(const std::string& text) {
  const ConfigFile cf = ConfigFile::parse_string(text);
  reject_unknown_keys(cf);

  RunConfig rc;
  if (cf.has("model", "family"))
    rc.model = build_model(cf, cf.get_str("model", "family", ""));
  else if (cf.sections.count("model"))
    throw ConfigError("config: [model] section requires a 'family' key");

  rc.grid_points = cf.get_int("grid", "points", rc.grid_points);
  rc.x_samples = cf.get_int("grid", "x_samples", rc.x_samples);
  if (rc.grid_points < 2) throw ConfigError("config: grid.points must be >= 2");
  if (rc.x_samples < 1) throw ConfigError("config: grid.x_samples must be >= 1");

  rc.seed = cf.get_u64("run", "seed", rc.seed);
  rc.tol = cf.get_double("run", "tol", rc.tol);
  rc.out_dir = cf.get_str("run", "out", rc.out_dir);
  rc.jobs = cf.get_int("run", "jobs", rc.jobs);
  if (!(rc.tol > 0.0)) throw ConfigError("config: run.tol must be positive");
  rc.task.seed = rc.seed; // one master seed keys every stochastic component

  rc.task.washout = cf.get_int("task", "washout", rc.task.washout);
  rc.task.n_train = cf.get_int("task", "n_train", rc.task.n_train);
  rc.task.n_test = cf.get_int("task", "n_test", rc.task.n_test);
  rc.task.lambda = cf.get_double("task", "lambda", rc.task.lambda);
  rc.task.realizations = cf.get_int("task", "realizations", rc.task.realizations);

  rc.trials = cf.get_int("search", "trials", rc.trials);
  rc.tol_in = cf.get_double("search", "tol_in", rc.tol_in);
  rc.tol_out = cf.get_double("search", "tol_out", rc.tol_out);
  rc.seq_len = cf.get_int("search", "seq_len", rc.seq_len);
  rc.pair_offset = cf.get_double("search", "offset", rc.pair_offset);
  if (rc.trials < 1 || rc.seq_len < 1)
    throw ConfigError("config: search.trials and search.seq_len must be >= 1");

  rc.preimage_z0 = cf.get_double("preimage", "z0", rc.preimage_z0);

  rc.gamma_lo = cf.get_double("fig1", "gamma_lo", rc.gamma_lo);
  rc.gamma_hi = cf.get_double("fig1", "gamma_hi", rc.gamma_hi);
  rc.z_lo = cf.get_double("fig1", "z_lo", rc.z_lo);
  rc.z_hi = cf.get_double("fig1", "z_hi", rc.z_hi);
  rc.gamma_points = cf.get_int("fig1", "gamma_points", rc.gamma_points);
  rc.z_points = cf.get_int("fig1", "z_points", rc.z_points);
  rc.dtau = cf.get_double("fig1", "dtau", rc.dtau);
  rc.quadratic = cf.get_bool("fig1", "quadratic", rc.quadratic);
  if (!(rc.gamma_lo > 0.0) || !(rc.gamma_hi > rc.gamma_lo))
    throw ConfigError("config: fig1 gamma range must satisfy 0 < gamma_lo < gamma_hi");
  if (!(rc.z_hi > rc.z_lo)) throw ConfigError("config: fig1 z range is empty");
  if (rc.gamma_points < 2 || rc.z_points < 2)
    throw ConfigError("config: fig1 grids need at least 2 points per axis");

  if (cf.has("fig2", "eps_list"))
    rc.eps_list = parse_double_list(cf.get_str("fig2", "eps_list", ""));
  if (cf.has("fig2", "g_grid"))
    rc.g_grid = parse_double_list(cf.get_str("fig2", "g_grid", ""));
  for (double e : rc.eps_list)
    if (e <= 0.0 || e >= 1.0)
      throw ConfigError("config: fig2 eps values must lie in (0, 1)");

  return rc;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return from_string(buf.str());
}

} // namespace qsas

// main.cpp -- command-line front end.
//
// One subcommand per analysis; every run writes CSV detail plus a
// summary.json with a machine-readable verdict.  Exit codes: 0 success,
// 1 a check's verdict is "fail" (so shells can gate on it), 2 usage or
// configuration error, 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsas/config.hpp"
#include "qsas/error.hpp"
#include "qsas/families.hpp"
#include "qsas/injectivity.hpp"
#include "qsas/io.hpp"
#include "qsas/parallel.hpp"
#include "qsas/rng.hpp"
#include "qsas/sas.hpp"
#include "qsas/tasks.hpp"

namespace {

using nlohmann::json;
using namespace qsas;

constexpr int kExitPass = 0;
constexpr int kExitFailVerdict = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<double> tol;
  bool fast = false;
};

// Resolve config file + flag overrides into the final run configuration.
RunConfig resolve(const CliFlags& fl) {
  RunConfig rc = fl.config_path.empty() ? RunConfig::defaults()
                                        : RunConfig::from_file(fl.config_path);
  if (!fl.out_dir.empty()) rc.out_dir = fl.out_dir;
  if (fl.seed) {
    rc.seed = *fl.seed;
    rc.task.seed = *fl.seed;
  }
  if (fl.jobs) rc.jobs = *fl.jobs;
  if (fl.tol) {
    if (!(*fl.tol > 0.0)) throw ConfigError("--tol must be positive");
    rc.tol = *fl.tol;
  }
  if (fl.fast) rc.task.realizations = 10;
  std::filesystem::create_directories(rc.out_dir);
  return rc;
}

ModelBundle model_or(const RunConfig& rc, ModelBundle fallback) {
  return rc.model.has_value() ? *rc.model : std::move(fallback);
}

ModelBundle default_reset_rotation() {
  return make_reset_rotation(0.5, 1.0, InputDomain::interval(0.0, 2.0 * M_PI));
}

json base_summary(const std::string& command, const RunConfig& rc) {
  json j;
  j["command"] = command;
  j["verdict"] = "n/a";
  j["seed"] = rc.seed;
  j["jobs"] = rc.jobs;
  j["outputs"] = json::array();
  j["details"] = json::object();
  return j;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j)
      row.push_back(json::array({m.at(i, j).real(), m.at(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

json vector_to_json(const RealVector& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

int finish(const RunConfig& rc, json& summary, std::vector<std::string> outputs,
           bool fail_verdict = false) {
  for (const auto& p : outputs) summary["outputs"].push_back(p);
  const std::string path = io::write_summary(rc.out_dir, summary);
  std::cout << summary["command"].get<std::string>() << ": verdict "
            << summary["verdict"].get<std::string>() << ", summary " << path
            << "\n";
  return fail_verdict ? kExitFailVerdict : kExitPass;
}

//============================================================================
// Subcommand bodies
//============================================================================

int cmd_sas_extract(const RunConfig& rc) {
  const ModelBundle mb = model_or(rc, default_reset_rotation());
  const GellMannBasis basis = GellMannBasis::make(mb.channel.d);
  const int N = mb.channel.d * mb.channel.d - 1;
  const std::vector<RealVector> grid = uniform_grid(mb.channel.domain, rc.grid_points);

  std::vector<std::string> p_header{"z"};
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j)
      p_header.push_back("p_" + std::to_string(i) + "_" + std::to_string(j));
  std::vector<std::string> q_header{"z"};
  for (int i = 1; i <= N; ++i) q_header.push_back("q_" + std::to_string(i));

  std::vector<std::vector<double>> p_rows, q_rows;
  for (const RealVector& z : grid) {
    const RealMatrix that = extract_superop(mb.channel.at(z), basis);
    std::vector<double> pr{z[0]}, qr{z[0]};
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j) pr.push_back(that.at(i, j));
    // q column of the transfer matrix: tr(B_i T(I, z)) / sqrt(d).
    for (int i = 1; i <= N; ++i) qr.push_back(that.at(i, 0));
    p_rows.push_back(std::move(pr));
    q_rows.push_back(std::move(qr));
  }

  const std::string p_path = rc.out_dir + "/p.csv";
  const std::string q_path = rc.out_dir + "/q.csv";
  io::write_csv(p_path, p_header, p_rows);
  io::write_csv(q_path, q_header, q_rows);

  json j = base_summary("sas-extract", rc);
  j["details"]["model"] = mb.name;
  j["details"]["grid_points"] = static_cast<int>(grid.size());
  return finish(rc, j, {p_path, q_path});
}

int cmd_fixed_point(const RunConfig& rc) {
  const ModelBundle mb = model_or(rc, default_reset_rotation());
  const std::vector<RealVector> grid = uniform_grid(mb.sas.domain, rc.grid_points);

  std::vector<std::string> header{"z"};
  for (int i = 1; i <= mb.sas.N; ++i) header.push_back("x_" + std::to_string(i));
  std::vector<std::vector<double>> rows;
  for (const RealVector& z : grid) {
    const RealVector x = fixed_point(mb.sas, z);
    std::vector<double> row{z[0]};
    for (int i = 0; i < x.size(); ++i) row.push_back(x[i]);
    rows.push_back(std::move(row));
  }
  const std::string path = rc.out_dir + "/fixed_point.csv";
  io::write_csv(path, header, rows);

  json j = base_summary("fixed-point", rc);
  j["details"]["model"] = mb.name;
  j["details"]["grid_points"] = static_cast<int>(grid.size());
  return finish(rc, j, {path});
}

int cmd_esp_check(const RunConfig& rc) {
  const ModelBundle mb = model_or(rc, default_reset_rotation());
  const EspReport rep =
      esp_check(mb.sas, uniform_grid(mb.sas.domain, rc.grid_points), rc.jobs);

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < rep.grid.size(); ++i)
    rows.push_back({rep.grid[i][0], rep.norms[i]});
  const std::string path = rc.out_dir + "/esp.csv";
  io::write_csv(path, {"z", "norm"}, rows);

  json j = base_summary("esp-check", rc);
  j["verdict"] = rep.pass ? "pass" : "fail";
  j["details"]["model"] = mb.name;
  j["details"]["max_norm"] = rep.max_norm;
  j["details"]["margin"] = rep.margin;
  return finish(rc, j, {path}, !rep.pass);
}

int cmd_constant_filter(const RunConfig& rc) {
  const ModelBundle mb = model_or(rc, default_reset_rotation());
  const std::vector<RealVector> grid = uniform_grid(mb.sas.domain, rc.grid_points);
  const ContractedEncoding* split =
      mb.split.has_value() ? &mb.split.value() : nullptr;
  const ConstantFilterReport rep = constant_filter_check(mb.sas, grid, rc.tol, split);

  std::vector<std::string> header{"z"};
  for (int i = 1; i <= mb.sas.N; ++i) header.push_back("x_" + std::to_string(i));
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < rep.grid.size(); ++k) {
    std::vector<double> row{rep.grid[k][0]};
    for (int i = 0; i < mb.sas.N; ++i) row.push_back(rep.fixed_points[k][i]);
    rows.push_back(std::move(row));
  }
  const std::string path = rc.out_dir + "/fixed_point_map.csv";
  io::write_csv(path, header, rows);

  json j = base_summary("constant-filter", rc);
  j["details"]["model"] = mb.name;
  j["details"]["filter"] = rep.verdict;
  j["details"]["max_deviation"] = rep.max_deviation;
  j["details"]["rho_star_T"] = matrix_to_json(rep.rho_star_T);
  if (rep.has_split) {
    j["details"]["rho_star_E"] = matrix_to_json(rep.rho_star_E);
    j["details"]["rho_prime"] = matrix_to_json(rep.rho_prime);
    j["details"]["rho_prime_defect"] = rep.rho_prime_defect;
    if (rep.commutator_residual >= 0.0)
      j["details"]["commutator_residual"] = rep.commutator_residual;
  }
  return finish(rc, j, {path});
}

int cmd_injectivity_scan(const RunConfig& rc) {
  const ModelBundle mb = model_or(rc, make_reset_depolarizing(0.5));
  const std::vector<RealVector> grid = uniform_grid(mb.sas.domain, rc.grid_points);
  const std::vector<RealVector> xs =
      reachable_sample(mb.sas, rc.x_samples, 0, rc.seed);
  const GlobalScanResult res =
      global_injectivity_scan(mb.sas, grid, xs, 1e-10, rc.jobs);

  std::vector<std::vector<double>> rows;
  for (const RankReport& r : res.reports) {
    double frob = 0.0;
    for (double v : r.M.a) frob += v * v;
    rows.push_back({r.z[0], std::sqrt(frob), double(r.rank), r.min_singular_value});
  }
  const std::string path = rc.out_dir + "/injectivity_scan.csv";
  io::write_csv(path, {"z", "norm", "rank", "min_singular_value"}, rows);

  json j = base_summary("injectivity-scan", rc);
  j["verdict"] = res.summary.all_pass ? "pass" : "fail";
  j["details"]["model"] = mb.name;
  j["details"]["scan_verdict"] = res.summary.verdict;
  j["details"]["n_reports"] = res.summary.n_reports;
  j["details"]["min_singular_value"] = res.summary.min_singular_value;
  json wit = json::array();
  for (size_t i = 0; i < res.summary.failures.size() && i < 10; ++i) {
    const RankReport& r = res.summary.failures[i];
    wit.push_back({{"z", vector_to_json(r.z)}, {"x", vector_to_json(r.x)},
                   {"rank", r.rank}});
  }
  j["details"]["failure_witnesses"] = wit;
  return finish(rc, j, {path}, !res.summary.all_pass);
}

int cmd_local_injectivity(const RunConfig& rc) {
  const ModelBundle mb = model_or(rc, default_reset_rotation());
  const RealVector z0{rc.preimage_z0};
  const RankReport rep = local_injectivity_at_constant(mb.sas, z0);

  json j = base_summary("local-injectivity", rc);
  j["verdict"] = rep.pass ? "pass" : "fail";
  j["details"]["model"] = mb.name;
  j["details"]["z0"] = rc.preimage_z0;
  j["details"]["x_star"] = vector_to_json(rep.x);
  j["details"]["singular_values"] = vector_to_json(rep.singular_values);
  j["details"]["rank"] = rep.rank;
  return finish(rc, j, {}, !rep.pass);
}

int cmd_preimage(const RunConfig& rc) {
  const ModelBundle mb = model_or(rc, default_reset_rotation());
  const RealVector x0 = fixed_point(mb.sas, RealVector{rc.preimage_z0});
  const std::vector<RealVector> grid = uniform_grid(mb.sas.domain, rc.grid_points);
  const PreimageSet pre = preimage_constant_output(mb.sas, x0, grid, rc.tol, rc.seed);

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < pre.members.size(); ++i)
    rows.push_back({pre.members[i][0], pre.deviations[i]});
  const std::string path = rc.out_dir + "/preimage.csv";
  io::write_csv(path, {"z", "deviation"}, rows);

  json j = base_summary("preimage", rc);
  j["verdict"] = pre.sequence_check_pass ? "pass" : "fail";
  j["details"]["model"] = mb.name;
  j["details"]["z0"] = rc.preimage_z0;
  j["details"]["x0"] = vector_to_json(pre.x0);
  j["details"]["n_members"] = static_cast<int>(pre.members.size());
  json reps = json::array();
  for (const RealVector& r : pre.cluster_reps) reps.push_back(r[0]);
  j["details"]["cluster_representatives"] = reps;
  j["details"]["sequence_max_dev"] = pre.sequence_max_dev;
  return finish(rc, j, {path}, !pre.sequence_check_pass);
}

int cmd_counterexample(const RunConfig& rc) {
  // Default: the 2*pi-periodic encoding on [0, 2], where sequences offset
  // by exactly 1 produce identical channels.
  const ModelBundle mb = model_or(
      rc, make_reset_rotation(0.5, 2.0 * M_PI, InputDomain::interval(0.0, 2.0)));

  const double lo = mb.sas.domain.lo[0];
  const double hi = mb.sas.domain.hi[0];
  const double offset = rc.pair_offset;
  if (hi - lo <= std::abs(offset))
    throw ConfigError("counterexample: domain too narrow for search.offset");
  const int len = rc.seq_len;
  const PairGenerator gen = [lo, hi, offset, len](Rng& rng) {
    std::vector<double> a(static_cast<size_t>(len)), b(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
      a[i] = offset >= 0.0 ? rng.uniform(lo, hi - offset)
                           : rng.uniform(lo - offset, hi);
      b[i] = a[i] + offset;
    }
    return std::make_pair(a, b);
  };

  const auto witness = counterexample_search(mb.sas, gen, rc.trials, rc.tol_in,
                                             rc.tol_out, rc.seed, rc.jobs);

  json j = base_summary("counterexample", rc);
  j["details"]["model"] = mb.name;
  j["details"]["trials"] = rc.trials;
  j["details"]["witness_found"] = witness.has_value();
  std::vector<std::string> outputs;
  if (witness) {
    j["details"]["input_gap"] = witness->in_dist;
    j["details"]["output_gap"] = witness->out_dist;
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < witness->a.size(); ++i)
      rows.push_back({double(i), witness->a[i], witness->b[i]});
    const std::string path = rc.out_dir + "/counterexample_pair.csv";
    io::write_csv(path, {"t", "z_a", "z_b"}, rows);
    outputs.push_back(path);
  }
  return finish(rc, j, outputs);
}

int cmd_fig1(const RunConfig& rc) {
  const std::vector<double> gammas =
      uniform_grid_1d(rc.gamma_lo, rc.gamma_hi, rc.gamma_points);
  const std::vector<double> zs = uniform_grid_1d(rc.z_lo, rc.z_hi, rc.z_points);
  const Fig1Result res = fig1_scan(gammas, zs, rc.dtau, rc.quadratic, rc.jobs);

  std::vector<std::vector<double>> rows;
  double max_residual = 0.0;
  int errors = 0;
  for (const Fig1Point& pt : res.points) {
    rows.push_back({pt.z, pt.gamma, pt.norm, double(pt.rank),
                    pt.min_singular_value, pt.residual});
    if (pt.ok)
      max_residual = std::max(max_residual, pt.residual);
    else
      ++errors;
  }
  const std::string path = rc.out_dir + "/fig1.csv";
  io::write_csv(path, {"z", "gamma", "norm", "rank", "min_singular_value", "residual"},
                rows);

  json j = base_summary("fig1", rc);
  j["details"]["rows"] = static_cast<int>(rows.size());
  j["details"]["max_residual"] = max_residual;
  j["details"]["points_with_errors"] = errors;
  j["details"]["dtau"] = rc.dtau;
  j["details"]["quadratic"] = rc.quadratic;
  return finish(rc, j, {path});
}

int cmd_fig2(const RunConfig& rc) {
  const std::vector<double> gg = rc.g_grid.empty() ? default_g_grid() : rc.g_grid;
  const Fig2Result res = fig2_sweep(rc.eps_list, gg, rc.task, rc.jobs);

  std::vector<std::vector<double>> rows;
  for (const Fig2Row& r : res.rows)
    rows.push_back({r.eps, r.g, r.mean_c, r.std_c, double(r.n_realizations)});
  const std::string path = rc.out_dir + "/fig2.csv";
  io::write_csv(path, {"epsilon", "g", "mean_C", "std_C", "n_realizations"}, rows);

  json j = base_summary("fig2", rc);
  j["details"]["rows"] = static_cast<int>(rows.size());
  j["details"]["eps_list"] = rc.eps_list;
  j["details"]["realizations"] = rc.task.realizations;
  return finish(rc, j, {path});
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Parameterized quantum channels as state-affine systems: extraction, "
      "echo-state and injectivity diagnostics, and reservoir benchmarks"};
  app.require_subcommand(1);
  app.fallthrough(true);

  CliFlags fl;
  app.add_option("--config", fl.config_path, "Path to an INI run configuration");
  app.add_option("--out", fl.out_dir, "Output directory (default from config or .)");
  std::uint64_t seed_val = 0;
  auto* seed_opt = app.add_option("--seed", seed_val, "Master seed (fixes all randomness)");
  int jobs_val = 0;
  auto* jobs_opt =
      app.add_option("--jobs", jobs_val, "Parallel jobs; 1 = serial, 0 = all cores");
  double tol_val = 0.0;
  auto* tol_opt = app.add_option("--tol", tol_val, "Tolerance override");
  app.add_flag("--fast", fl.fast, "Fast mode: 10 realizations in sweeps");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sas-extract", "Write the affine blocks p(z), q(z) over the input grid"},
      {"fixed-point", "Write the fixed-point map x*(z) over the input grid"},
      {"esp-check", "Spectral norms of p(z); pass iff the contraction margin > 0"},
      {"constant-filter", "Detect constant filters via the fixed-point map"},
      {"injectivity-scan", "Rank condition over inputs x reachable states"},
      {"local-injectivity", "Rank condition at the fixed point of one input"},
      {"preimage", "Constant-output preimage of the fixed-point map"},
      {"counterexample", "Search for distinct inputs with identical outputs"},
      {"fig1", "Rank-condition norm over (gamma, z) for the dissipative qubit"},
      {"fig2", "Memory-capacity sweep over (epsilon, g)"},
  };
  for (const auto& [name, desc] : commands) app.add_subcommand(name, desc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (seed_opt->count()) fl.seed = seed_val;
  if (jobs_opt->count()) fl.jobs = jobs_val;
  if (tol_opt->count()) fl.tol = tol_val;

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const RunConfig rc = resolve(fl);
    if (cmd == "sas-extract") return cmd_sas_extract(rc);
    if (cmd == "fixed-point") return cmd_fixed_point(rc);
    if (cmd == "esp-check") return cmd_esp_check(rc);
    if (cmd == "constant-filter") return cmd_constant_filter(rc);
    if (cmd == "injectivity-scan") return cmd_injectivity_scan(rc);
    if (cmd == "local-injectivity") return cmd_local_injectivity(rc);
    if (cmd == "preimage") return cmd_preimage(rc);
    if (cmd == "counterexample") return cmd_counterexample(rc);
    if (cmd == "fig1") return cmd_fig1(rc);
    if (cmd == "fig2") return cmd_fig2(rc);
    std::cerr << "error: unknown subcommand " << cmd << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

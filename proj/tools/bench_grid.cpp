// bench_grid.cpp -- serial reference vs OpenMP kernel on the grid scans.
//
// Runs each workload once with jobs=1 (serial reference path) and once with
// jobs=0 (OpenMP, all cores), reports wall times and speedup, and verifies
// that both paths produce bitwise-identical results.
//
//   usage: bench_grid [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "qsas/families.hpp"
#include "qsas/injectivity.hpp"
#include "qsas/parallel.hpp"
#include "qsas/sas.hpp"
#include "qsas/tasks.hpp"

using namespace qsas;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Row {
  std::string name;
  double serial = 0.0;
  double parallel = 0.0;
  bool identical = false;
};

template <class F, class Eq>
Row bench(const std::string& name, int repeats, F&& run, Eq&& equal) {
  Row row;
  row.name = name;
  auto ref = run(1);
  auto par = run(0);
  row.identical = equal(ref, par);

  for (int pass = 0; pass < 2; ++pass) {
    const int jobs = pass == 0 ? 1 : 0;
    const auto t0 = Clock::now();
    for (int r = 0; r < repeats; ++r) run(jobs);
    const double dt = seconds_since(t0) / repeats;
    (pass == 0 ? row.serial : row.parallel) = dt;
  }
  return row;
}

} // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  if (repeats < 1) {
    std::fprintf(stderr, "usage: bench_grid [repeats >= 1]\n");
    return 2;
  }

  std::vector<Row> rows;

  // Spectral norms over a dense input grid (closed-form model).
  {
    const ModelBundle mb =
        make_reset_rotation(0.5, 1.0, InputDomain::interval(0.0, 2.0 * M_PI));
    const auto grid = uniform_grid(mb.sas.domain, 20001);
    rows.push_back(bench(
        "esp-check 20001 pts", repeats,
        [&](int jobs) { return esp_check(mb.sas, grid, jobs); },
        [](const EspReport& a, const EspReport& b) { return a.norms == b.norms; }));
  }

  // Dissipative-qubit scan (matrix exponentials dominate).
  {
    const auto gammas = uniform_grid_1d(0.05, 2.0, 41);
    const auto zs = uniform_grid_1d(-2.0, 2.0, 41);
    rows.push_back(bench(
        "fig1 41x41", repeats,
        [&](int jobs) { return fig1_scan(gammas, zs, 1.0, false, jobs); },
        [](const Fig1Result& a, const Fig1Result& b) {
          for (size_t i = 0; i < a.points.size(); ++i)
            if (a.points[i].norm != b.points[i].norm ||
                a.points[i].residual != b.points[i].residual)
              return false;
          return true;
        }));
  }

  // Memory-capacity realizations (per-realization seeded streams).
  {
    TaskConfig cfg;
    cfg.realizations = 20;
    rows.push_back(bench(
        "stm eps=0.2 g=1, 20 runs", repeats,
        [&](int jobs) { return stm_task(0.2, 1.0, cfg, jobs); },
        [](const CapacityResult& a, const CapacityResult& b) {
          return a.values == b.values && a.mean == b.mean;
        }));
  }

  std::printf("%-28s %12s %12s %9s %10s\n", "workload", "serial [s]",
              "openmp [s]", "speedup", "identical");
  bool all_identical = true;
  for (const Row& r : rows) {
    std::printf("%-28s %12.4f %12.4f %8.2fx %10s\n", r.name.c_str(), r.serial,
                r.parallel, r.serial / r.parallel, r.identical ? "yes" : "NO");
    all_identical = all_identical && r.identical;
  }
#ifdef QSAS_HAVE_OPENMP
  std::printf("openmp threads available: %d\n", par::default_jobs());
#else
  std::printf("built without OpenMP: both columns use the serial path\n");
#endif
  return all_identical ? 0 : 1;
}

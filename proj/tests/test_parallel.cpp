// The OpenMP grid kernel against the serial reference: identical slots,
// identical exceptions, and bitwise-identical results from every
// multi-threaded entry point in the library.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qsas/error.hpp"
#include "qsas/families.hpp"
#include "qsas/injectivity.hpp"
#include "qsas/parallel.hpp"
#include "qsas/rng.hpp"
#include "qsas/sas.hpp"
#include "qsas/tasks.hpp"

using namespace qsas;

TEST_CASE("grid_map fills identical slots for any job count") {
  const std::size_t n = 500;
  auto run = [n](int jobs) {
    std::vector<double> out(n);
    par::grid_map(n, [&out](std::size_t i) {
      out[i] = std::sin(static_cast<double>(i)) * static_cast<double>(i);
    }, jobs);
    return out;
  };
  const std::vector<double> serial = run(1);
  CHECK(serial == run(3));
  CHECK(serial == run(4));
  CHECK(serial == run(0)); // jobs <= 0 means "all cores"
  CHECK(par::default_jobs() >= 1);
}

TEST_CASE("grid_map rethrows the lowest-index exception on every path") {
  auto thrower = [](std::size_t i) {
    if (i == 11) throw DomainError("failure at index 11");
    if (i == 37) throw DomainError("failure at index 37");
  };
  for (int jobs : {1, 4}) {
    CAPTURE(jobs);
    try {
      par::grid_map(100, thrower, jobs);
      FAIL("expected a DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("11") != std::string::npos);
    }
  }
}

TEST_CASE("kahan_sum tracks a long-double reference") {
  std::vector<double> v(100001);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::sin(0.001 * static_cast<double>(i));

  long double ref = 0.0L;
  for (double x : v) ref += x;
  double naive = 0.0;
  for (double x : v) naive += x;

  const double kahan = par::kahan_sum(v.data(), v.size());
  CHECK(std::abs(kahan - static_cast<double>(ref)) < 1e-10);
  CHECK(std::abs(kahan - static_cast<double>(ref)) <=
        std::abs(naive - static_cast<double>(ref)));

  // A value that accumulates representation error under naive summation.
  // The reference is the exact product n * fl(0.1) -- a sequential long
  // double loop is NOT a valid reference here, because a million rounded
  // additions of identical values drift by ~1e-9 even at 64-bit precision.
  std::vector<double> tenths(1000000, 0.1);
  const long double texact = 1000000.0L * static_cast<long double>(0.1);
  double tnaive = 0.0;
  for (double x : tenths) tnaive += x;
  const double tk = par::kahan_sum(tenths.data(), tenths.size());
  CHECK(std::abs(tk - static_cast<double>(texact)) < 1e-10);
  CHECK(std::abs(tk - static_cast<double>(texact)) <
        std::abs(tnaive - static_cast<double>(texact)));
}

TEST_CASE("esp_check is bitwise thread-count independent") {
  const ModelBundle mb =
      make_reset_rotation(0.37, 1.4, InputDomain::interval(0.0, 2.0 * M_PI));
  const std::vector<RealVector> grid = uniform_grid(mb.sas.domain, 101);
  const EspReport a = esp_check(mb.sas, grid, 1);
  const EspReport b = esp_check(mb.sas, grid, 4);
  REQUIRE(a.norms.size() == b.norms.size());
  for (size_t i = 0; i < a.norms.size(); ++i) CHECK(a.norms[i] == b.norms[i]);
  CHECK(a.max_norm == b.max_norm);
  CHECK(a.margin == b.margin);
  CHECK(a.pass == b.pass);
}

TEST_CASE("fig1_scan is bitwise thread-count independent") {
  const std::vector<double> gammas = uniform_grid_1d(0.1, 2.0, 11);
  const std::vector<double> zs = uniform_grid_1d(-2.0, 2.0, 11);
  const Fig1Result a = fig1_scan(gammas, zs, 1.0, false, 1);
  const Fig1Result b = fig1_scan(gammas, zs, 1.0, false, 4);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].gamma == b.points[i].gamma);
    CHECK(a.points[i].z == b.points[i].z);
    CHECK(a.points[i].norm == b.points[i].norm);
    CHECK(a.points[i].min_singular_value == b.points[i].min_singular_value);
    CHECK(a.points[i].residual == b.points[i].residual);
    CHECK(a.points[i].rank == b.points[i].rank);
    CHECK(a.points[i].ok == b.points[i].ok);
  }
}

TEST_CASE("global_injectivity_scan is bitwise thread-count independent") {
  const ModelBundle mb = make_reset_depolarizing(0.5);
  const std::vector<RealVector> grid = uniform_grid(mb.sas.domain, 21);
  const std::vector<RealVector> xs = reachable_sample(mb.sas, 8, 0, 5);
  const GlobalScanResult a = global_injectivity_scan(mb.sas, grid, xs, 1e-10, 1);
  const GlobalScanResult b = global_injectivity_scan(mb.sas, grid, xs, 1e-10, 4);
  REQUIRE(a.reports.size() == b.reports.size());
  for (size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].rank == b.reports[i].rank);
    CHECK(a.reports[i].min_singular_value == b.reports[i].min_singular_value);
    CHECK(qt::mat_dist(a.reports[i].M, b.reports[i].M) == 0.0);
  }
  CHECK(a.summary.all_pass == b.summary.all_pass);
  CHECK(a.summary.min_singular_value == b.summary.min_singular_value);
  CHECK(a.summary.verdict == b.summary.verdict);
}

TEST_CASE("stm_task is bitwise thread-count independent") {
  TaskConfig cfg;
  cfg.washout = 50;
  cfg.n_train = 200;
  cfg.n_test = 200;
  cfg.realizations = 8;
  cfg.seed = 99;
  const CapacityResult a = stm_task(0.3, 1.5, cfg, 1);
  const CapacityResult b = stm_task(0.3, 1.5, cfg, 4);
  CHECK(a.values == b.values);
  CHECK(a.train_values == b.train_values);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);
  CHECK(a.train_mean == b.train_mean);
}

TEST_CASE("counterexample_search returns the same witness on every path") {
  const ModelBundle mb =
      make_reset_rotation(0.5, 2.0 * M_PI, InputDomain::interval(0.0, 2.0));
  const PairGenerator gen = [](Rng& rng) {
    std::vector<double> a(32), b(32);
    for (size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.uniform(0.0, 1.0);
      b[i] = a[i] + 1.0;
    }
    return std::make_pair(a, b);
  };
  const auto w1 = counterexample_search(mb.sas, gen, 16, 0.5, 1e-8, 4242, 1);
  const auto w4 = counterexample_search(mb.sas, gen, 16, 0.5, 1e-8, 4242, 4);
  REQUIRE(w1.has_value());
  REQUIRE(w4.has_value());
  CHECK(w1->a == w4->a);
  CHECK(w1->b == w4->b);
  CHECK(w1->in_dist == w4->in_dist);
  CHECK(w1->out_dist == w4->out_dist);
}

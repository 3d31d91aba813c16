// Reservoir driving, ridge regression, capacity scoring, and the
// short-term-memory task on the reset+rotation reservoir.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "qsas/error.hpp"
#include "qsas/families.hpp"
#include "qsas/rng.hpp"
#include "qsas/sas.hpp"
#include "qsas/tasks.hpp"

using namespace qsas;

TEST_CASE("TaskConfig::validate rejects degenerate settings") {
  TaskConfig ok;
  CHECK_NOTHROW(ok.validate());

  TaskConfig bad = ok;
  bad.washout = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = ok;
  bad.n_train = 1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = ok;
  bad.n_test = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = ok;
  bad.lambda = -1e-3;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = ok;
  bad.realizations = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("gen_uniform_inputs: range, determinism, moments") {
  const std::vector<double> a = gen_uniform_inputs(10000, 0.0, 1.0, 42);
  REQUIRE(a.size() == 10000);
  double lo = 1e300, hi = -1e300, sum = 0.0;
  for (double v : a) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  const double mean = sum / 10000.0; // CLT: sd of the mean is ~0.0029
  CHECK(mean > 0.48);
  CHECK(mean < 0.52);

  const std::vector<double> b = gen_uniform_inputs(10000, 0.0, 1.0, 42);
  CHECK(a == b); // bitwise deterministic
  const std::vector<double> c = gen_uniform_inputs(10000, 0.0, 1.0, 43);
  CHECK(a != c);

  const std::vector<double> shifted = gen_uniform_inputs(100, -3.0, 7.0, 9);
  for (double v : shifted) {
    CHECK(v >= -3.0);
    CHECK(v < 7.0);
  }

  CHECK_THROWS_AS((void)gen_uniform_inputs(10, 1.0, 1.0, 1), DomainError);
  CHECK_THROWS_AS((void)gen_uniform_inputs(10, 2.0, 1.0, 1), DomainError);
  CHECK_THROWS_AS((void)gen_uniform_inputs(-1, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("drive_reservoir matches the filter trajectory bitwise") {
  const ModelBundle mb =
      make_reset_rotation(0.5, 1.0, InputDomain::interval(0.0, 1.0));
  const std::vector<double> inputs = gen_uniform_inputs(200, 0.0, 1.0, 11);
  const int washout = 50;

  const RealMatrix X = drive_reservoir(mb.sas, inputs, washout);
  REQUIRE(X.rows == 150);
  REQUIRE(X.cols == 3);

  const FilterResult fr = filter_eval(mb.sas, inputs);
  REQUIRE(fr.states.size() == inputs.size());
  for (int r = 0; r < X.rows; ++r)
    for (int j = 0; j < 3; ++j)
      CHECK(X.at(r, j) == fr.states[static_cast<size_t>(washout + r)][j]);
}

TEST_CASE("drive_reservoir: hard reset pins the state, errors are typed") {
  // eps ~ 1: the state is q(z) after every step, independent of history.
  const double eps = 1.0 - 1e-9;
  const ModelBundle mb =
      make_reset_rotation(eps, 1.0, InputDomain::interval(0.0, 1.0));
  const std::vector<double> inputs = gen_uniform_inputs(10, 0.0, 1.0, 3);
  const RealMatrix X = drive_reservoir(mb.sas, inputs, 1);
  const double z3 = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < X.rows; ++r) {
    CHECK(std::abs(X.at(r, 0)) < 1e-8);
    CHECK(std::abs(X.at(r, 1)) < 1e-8);
    CHECK(std::abs(X.at(r, 2) - z3) < 1e-8);
  }

  CHECK_THROWS_AS((void)drive_reservoir(mb.sas, inputs, -1), DomainError);
  CHECK_THROWS_AS((void)drive_reservoir(mb.sas, inputs,
                                        static_cast<int>(inputs.size())),
                  DomainError);
  const ModelBundle rot = make_rotation_only(1.0, InputDomain::interval(0.0, 1.0));
  CHECK_THROWS_AS((void)drive_reservoir(rot.sas, inputs, 1), EspViolationError);
}

TEST_CASE("ridge_fit: recovery, shrinkage, normal equations, optimality") {
  Rng rng(71);
  const int n = 200;
  const RealMatrix X = qt::random_real(n, 3, rng);
  const RealVector w_true{0.3, -1.2, 2.0};
  const double b_true = 0.7;
  RealVector y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = b_true;
    for (int j = 0; j < 3; ++j) y[i] += X.at(i, j) * w_true[j];
  }

  SUBCASE("noise-free affine data is recovered") {
    const RidgeSolution sol = ridge_fit(X, y, 1e-10);
    CHECK(qt::vec_dist(sol.w, w_true) < 1e-6);
    CHECK(std::abs(sol.b - b_true) < 1e-6);
  }

  SUBCASE("constant targets give a zero readout and the mean intercept") {
    RealVector flat(n);
    for (int i = 0; i < n; ++i) flat[i] = 5.0;
    const RidgeSolution sol = ridge_fit(X, flat, 1e-10);
    CHECK(sol.w.norm2() < 1e-8);
    CHECK(std::abs(sol.b - 5.0) < 1e-10);
  }

  SUBCASE("huge regularization shrinks the readout to zero") {
    const RidgeSolution small = ridge_fit(X, y, 1e-10);
    const RidgeSolution big = ridge_fit(X, y, 1e12);
    CHECK(big.w.norm2() < 1e-6);
    CHECK(big.w.norm2() < 1e-3 * small.w.norm2());
  }

  SUBCASE("solution satisfies the centered normal equations") {
    const double lambda = 0.5;
    const RidgeSolution sol = ridge_fit(X, y, lambda);

    RealVector col_mean(3);
    double y_mean = 0.0;
    for (int i = 0; i < n; ++i) {
      y_mean += y[i] / n;
      for (int j = 0; j < 3; ++j) col_mean[j] += X.at(i, j) / n;
    }
    RealMatrix G(3, 3);
    RealVector rhs(3);
    for (int i = 0; i < n; ++i) {
      const double yc = y[i] - y_mean;
      for (int j = 0; j < 3; ++j) {
        const double xj = X.at(i, j) - col_mean[j];
        rhs[j] += xj * yc;
        for (int k = 0; k < 3; ++k) G.at(j, k) += xj * (X.at(i, k) - col_mean[k]);
      }
    }
    for (int j = 0; j < 3; ++j) G.at(j, j) += lambda;
    const RealVector res = (G * sol.w) - rhs;
    CHECK(res.norm_inf() < 1e-8);
  }

  SUBCASE("no perturbed readout beats the fit") {
    const double lambda = 0.5;
    const RidgeSolution sol = ridge_fit(X, y, lambda);
    auto objective = [&](const RealVector& w) {
      // Intercept re-optimized for each candidate readout.
      double xw_mean = 0.0, ym = 0.0;
      std::vector<double> xw(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += X.at(i, j) * w[j];
        xw[static_cast<size_t>(i)] = s;
        xw_mean += s / n;
        ym += y[i] / n;
      }
      const double b = ym - xw_mean;
      double J = lambda * dot(w, w);
      for (int i = 0; i < n; ++i) {
        const double r = xw[static_cast<size_t>(i)] + b - y[i];
        J += r * r;
      }
      return J;
    };
    const double j_star = objective(sol.w);
    for (int trial = 0; trial < 20; ++trial) {
      const RealVector delta = 1e-4 * qt::random_real_vector(3, rng);
      CHECK(j_star < objective(sol.w + delta));
    }
  }

  SUBCASE("shape and parameter validation") {
    CHECK_THROWS_AS((void)ridge_fit(X, RealVector(n - 1), 0.1), ShapeError);
    CHECK_THROWS_AS((void)ridge_fit(RealMatrix(1, 3), RealVector(1), 0.1),
                    ShapeError);
    CHECK_THROWS_AS((void)ridge_fit(X, y, -0.1), DomainError);
  }
}

TEST_CASE("memory_capacity: perfect prediction, affine invariance, noise") {
  Rng rng(72);
  const RealVector y = qt::random_real_vector(60, rng);

  CHECK(std::abs(memory_capacity(y, y) - 1.0) < 1e-12);

  RealVector affine(60);
  for (int i = 0; i < 60; ++i) affine[i] = -2.0 * y[i] + 5.0;
  CHECK(std::abs(memory_capacity(affine, y) - 1.0) < 1e-12);

  SUBCASE("affine maps of either argument do not change C") {
    for (int trial = 0; trial < 100; ++trial) {
      const RealVector u = qt::random_real_vector(50, rng);
      const RealVector v = qt::random_real_vector(50, rng);
      const double c = memory_capacity(u, v);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0 + 1e-12);
      RealVector u2(50);
      for (int i = 0; i < 50; ++i) u2[i] = 3.7 * u[i] - 2.0;
      CHECK(std::abs(memory_capacity(u2, v) - c) < 1e-10);
    }
  }

  SUBCASE("independent sequences carry no capacity") {
    const RealVector a = qt::random_real_vector(10000, rng);
    const RealVector b = qt::random_real_vector(10000, rng);
    CHECK(memory_capacity(a, b) < 0.01);
  }

  SUBCASE("degenerate inputs are rejected") {
    RealVector flat(60);
    for (int i = 0; i < 60; ++i) flat[i] = 2.5;
    CHECK_THROWS_AS((void)memory_capacity(flat, y), DomainError);
    CHECK_THROWS_AS((void)memory_capacity(y, flat), DomainError);
    CHECK_THROWS_AS((void)memory_capacity(y, RealVector(59)), ShapeError);
    CHECK_THROWS_AS((void)memory_capacity(RealVector{1.0}, RealVector{1.0}),
                    ShapeError);
  }
}

TEST_CASE("stm_task: capacity profile over the encoding strength") {
  TaskConfig cfg;
  cfg.washout = 100;
  cfg.n_train = 400;
  cfg.n_test = 400;
  cfg.lambda = 1e-10;
  cfg.realizations = 6;
  cfg.seed = 12345;

  const CapacityResult c_peak = stm_task(0.2, 1.0, cfg, 1);
  const CapacityResult c_mid = stm_task(0.2, 4.0, cfg, 1);
  const CapacityResult c_collapse = stm_task(0.2, 2.0 * M_PI, cfg, 1);

  // Rotations about a fixed axis add angles, so the state is a geometric
  // sum of R(g * (z_t + ... + z_{t-j+1})) q.  At g = 2*pi a uniform input
  // on [0, 1] randomizes each accumulated angle over the full circle, the
  // conditional mean of the state given any past input is constant, and the
  // linear readout reads pure noise: capacity collapses.
  CHECK(c_collapse.mean < 0.05);
  CHECK(c_peak.mean > c_collapse.mean + 0.2);
  // Intermediate strength keeps measurable memory but well below the peak:
  // the capacity profile decreases toward the collapse point.
  CHECK(c_mid.mean > c_collapse.mean + 0.05);
  CHECK(c_mid.mean < c_peak.mean);
  CHECK(c_peak.mean > 0.25);

  REQUIRE(c_peak.values.size() == 6);
  REQUIRE(c_peak.train_values.size() == 6);
  CHECK(c_peak.realizations == 6);
  for (double v : c_peak.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }

  // Reported moments match the per-realization values.
  long double acc = 0.0L;
  for (double v : c_peak.values) acc += v;
  const double mean = static_cast<double>(acc / 6.0L);
  CHECK(std::abs(c_peak.mean - mean) < 1e-14);
  long double ss = 0.0L;
  for (double v : c_peak.values) ss += (v - mean) * (v - mean);
  CHECK(std::abs(c_peak.stddev - std::sqrt(static_cast<double>(ss / 5.0L))) < 1e-12);
}

TEST_CASE("stm_task: determinism, washout robustness, validation") {
  TaskConfig cfg;
  cfg.washout = 100;
  cfg.n_train = 400;
  cfg.n_test = 400;
  cfg.realizations = 3;
  cfg.seed = 777;

  const CapacityResult a = stm_task(0.6, 1.0, cfg, 1);
  const CapacityResult b = stm_task(0.6, 1.0, cfg, 1);
  CHECK(a.values == b.values); // bitwise
  CHECK(a.mean == b.mean);

  // The data stream is seeded independently of the washout stream, so C
  // barely moves when the washout doubles (the pre-segment state is
  // forgotten at rate (1 - eps) per step).
  TaskConfig longer = cfg;
  longer.washout = 200;
  const CapacityResult c = stm_task(0.6, 1.0, longer, 1);
  CHECK(std::abs(a.mean - c.mean) < 1e-3);

  TaskConfig single = cfg;
  single.realizations = 1;
  const CapacityResult d = stm_task(0.6, 1.0, single, 1);
  CHECK(d.stddev == 0.0);
  CHECK(d.mean == d.values.at(0));

  CHECK_THROWS_AS((void)stm_task(0.0, 1.0, cfg, 1), DomainError);
  CHECK_THROWS_AS((void)stm_task(1.0, 1.0, cfg, 1), DomainError);
  TaskConfig bad = cfg;
  bad.washout = 0;
  CHECK_THROWS_AS((void)stm_task(0.5, 1.0, bad, 1), DomainError);
}

TEST_CASE("fig2_sweep: ordering and agreement with single cells") {
  TaskConfig cfg;
  cfg.washout = 50;
  cfg.n_train = 200;
  cfg.n_test = 200;
  cfg.realizations = 3;
  cfg.seed = 2'000;

  const std::vector<double> eps_list{0.2, 0.4};
  const std::vector<double> g_grid{1.0, 2.0 * M_PI};
  const Fig2Result res = fig2_sweep(eps_list, g_grid, cfg, 1);
  REQUIRE(res.rows.size() == 4);

  // eps-major, g in the given order.
  CHECK(res.rows[0].eps == 0.2);
  CHECK(res.rows[0].g == 1.0);
  CHECK(res.rows[1].eps == 0.2);
  CHECK(res.rows[1].g == 2.0 * M_PI);
  CHECK(res.rows[2].eps == 0.4);
  CHECK(res.rows[3].eps == 0.4);

  for (const Fig2Row& row : res.rows) {
    CHECK(row.n_realizations == 3);
    CHECK(row.mean_c >= 0.0);
    CHECK(row.mean_c <= 1.0 + 1e-12);
    CHECK(row.std_c >= 0.0);
    // Each cell equals a standalone run with the same config.
    const CapacityResult cell = stm_task(row.eps, row.g, cfg, 1);
    CHECK(row.mean_c == cell.mean);
    CHECK(row.std_c == cell.stddev);
  }

  CHECK_THROWS_AS((void)fig2_sweep({}, g_grid, cfg, 1), DomainError);
  CHECK_THROWS_AS((void)fig2_sweep(eps_list, {}, cfg, 1), DomainError);
}

TEST_CASE("default_g_grid: sorted, spans [0.05, 8], contains 2*pi exactly") {
  const std::vector<double> g = default_g_grid();
  REQUIRE(g.size() == 41);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::abs(g.front() - 0.05) < 1e-15);
  CHECK(std::abs(g.back() - 8.0) < 1e-13);
  CHECK(std::count(g.begin(), g.end(), 2.0 * M_PI) == 1);
  for (double v : g) CHECK(v > 0.0);
}

// tasks.hpp -- reservoir-computing experiment harness.
//
// Drives an affine reservoir x_t = p(z_t) x_{t-1} + q(z_t) with random
// inputs, trains a linear readout y_t = w.x_t + b by ridge regression, and
// scores the short-term-memory task (target = previous input) with the
// normalized squared correlation
//     C = cov^2(yhat, y) / (var(yhat) var(y))  in [0, 1].
// The sweep over input strength g and reset rate eps reproduces the
// memory-capacity profile of the reset+rotation reservoir: a plateau for
// g << 1, a peak near g ~ 1, and total collapse at g = 2*pi where the
// encoding becomes periodic and the reservoir stops distinguishing inputs.

#ifndef QSAS_TASKS_HPP
#define QSAS_TASKS_HPP

#include <cstdint>
#include <vector>

#include "qsas/sas.hpp"

namespace qsas {

struct TaskConfig {
  int washout = 100;
  int n_train = 1000;
  int n_test = 1000;
  double lambda = 1e-10; // ridge regularization
  int realizations = 100;
  std::uint64_t seed = 12345;

  // Throws DomainError on non-positive counts or negative lambda.
  void validate() const;
};

struct RidgeSolution {
  RealVector w;
  double b = 0.0;
};

struct CapacityResult {
  std::vector<double> values;       // per-realization C on the test segment
  std::vector<double> train_values; // same on the training segment
  double mean = 0.0;                // of `values`
  double stddev = 0.0;              // sample std (0 for a single realization)
  double train_mean = 0.0;
  int realizations = 0;
};

// Uniform inputs on [lo, hi), deterministic per seed.
std::vector<double> gen_uniform_inputs(int length, double lo, double hi,
                                       std::uint64_t seed);

// Trajectory from the zero-washed start with the first `washout` rows
// discarded; row t is the state after consuming inputs[washout + t].
// Scalar-input models only.  Throws EspViolationError when the sampled
// contraction margin is not positive.
RealMatrix drive_reservoir(const SasModel& sas, const std::vector<double>& inputs,
                           int washout);

// Ridge regression with intercept: minimizes |Xw - y|^2 + lambda |w|^2 over
// centered data.  With A = I - (1/N) 1 1^T, solves
//     (X^T A X + lambda I) w = X^T A y,    b = mean(y - Xw).
// Throws SingularMatrixError when the regularized normal matrix is singular
// (possible only at lambda = 0 with rank-deficient X).
RidgeSolution ridge_fit(const RealMatrix& X, const RealVector& y, double lambda);

// C = cov^2 / (var * var) of two equal-length sequences; throws DomainError
// when either variance vanishes (degenerate capacity).
double memory_capacity(const RealVector& yhat, const RealVector& y);

// Short-term-memory task on the reset+rotation reservoir: inputs uniform on
// [0, 1], encoding angle g*z, target = previous input.  Each realization
// draws its own washout and data streams from seeds derived from
// cfg.seed, trains on n_train steps and scores C on the next n_test.  The
// data stream does not depend on the washout length, so lengthening the
// washout perturbs C only through the (geometrically small) initial-state
// leakage.  Realizations run via the deterministic grid scheduler.
CapacityResult stm_task(double eps, double g, const TaskConfig& cfg, int jobs = 1);

struct Fig2Row {
  double eps = 0.0;
  double g = 0.0;
  double mean_c = 0.0;
  double std_c = 0.0;
  int n_realizations = 0;
};

struct Fig2Result {
  std::vector<Fig2Row> rows; // eps-major, g ascending
};

// Capacity sweep over (eps, g).
Fig2Result fig2_sweep(const std::vector<double>& eps_list,
                      const std::vector<double>& g_grid, const TaskConfig& cfg,
                      int jobs = 1);

// 40 log-spaced points on [0.05, 8] with the exact collapse point 2*pi
// inserted in order.
std::vector<double> default_g_grid();

} // namespace qsas

#endif // QSAS_TASKS_HPP

// tasks.cpp -- reservoir driving, ridge readout, memory capacity, sweeps.

#include "qsas/tasks.hpp"

#include <algorithm>
#include <cmath>

#include "qsas/error.hpp"
#include "qsas/families.hpp"
#include "qsas/parallel.hpp"
#include "qsas/rng.hpp"

namespace qsas {

void TaskConfig::validate() const {
  if (washout < 1 || n_train < 2 || n_test < 2)
    throw DomainError("TaskConfig: washout/n_train/n_test too small");
  if (lambda < 0.0) throw DomainError("TaskConfig: lambda must be >= 0");
  if (realizations < 1) throw DomainError("TaskConfig: realizations must be >= 1");
}

std::vector<double> gen_uniform_inputs(int length, double lo, double hi,
                                       std::uint64_t seed) {
  if (length < 0) throw DomainError("gen_uniform_inputs: negative length");
  if (!(lo < hi)) throw DomainError("gen_uniform_inputs: need lo < hi");
  Rng rng(seed);
  std::vector<double> z(static_cast<size_t>(length));
  for (double& v : z) v = rng.uniform(lo, hi);
  return z;
}

RealMatrix drive_reservoir(const SasModel& sas, const std::vector<double>& inputs,
                           int washout) {
  if (sas.n != 1) throw DomainError("drive_reservoir: scalar-input models only");
  if (washout < 0 || washout >= static_cast<int>(inputs.size()))
    throw DomainError("drive_reservoir: washout must leave at least one row");
  const EspReport esp = esp_check(sas, uniform_grid(sas.domain, 33), 1);
  if (!esp.pass)
    throw EspViolationError("drive_reservoir: contraction margin " +
                            std::to_string(esp.margin) + " is not positive");

  const int rows = static_cast<int>(inputs.size()) - washout;
  RealMatrix X(rows, sas.N);
  RealVector x(sas.N);
  for (int t = 0; t < static_cast<int>(inputs.size()); ++t) {
    x = sas.p1(inputs[static_cast<size_t>(t)]) * x + sas.q1(inputs[static_cast<size_t>(t)]);
    if (t >= washout)
      for (int j = 0; j < sas.N; ++j) X.at(t - washout, j) = x[j];
  }
  if (!X.all_finite()) throw NumericalError("drive_reservoir: non-finite state");
  return X;
}

//============================================================================
// Readout and capacity
//============================================================================

static double mean_of(const double* v, int n) {
  return par::kahan_sum(v, static_cast<size_t>(n)) / double(n);
}

RidgeSolution ridge_fit(const RealMatrix& X, const RealVector& y, double lambda) {
  const int n = X.rows, m = X.cols;
  if (n != y.size() || n < 2)
    throw ShapeError("ridge_fit: row count and target length mismatch");
  if (lambda < 0.0) throw DomainError("ridge_fit: lambda must be >= 0");

  // Center columns and target; centering implements the projector
  // A = I - (1/N) 1 1^T on both sides of the normal equations.
  RealVector col_mean(m);
  for (int j = 0; j < m; ++j) {
    double s = 0.0, c = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t0 = X.at(i, j) - c;
      const double t1 = s + t0;
      c = (t1 - s) - t0;
      s = t1;
    }
    col_mean[j] = s / double(n);
  }
  const double y_mean = mean_of(y.v.data(), n);

  RealMatrix G(m, m);
  RealVector rhs(m);
  for (int j = 0; j < m; ++j) {
    for (int k = j; k < m; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += (X.at(i, j) - col_mean[j]) * (X.at(i, k) - col_mean[k]);
      G.at(j, k) = s;
      G.at(k, j) = s;
    }
    G.at(j, j) += lambda;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += (X.at(i, j) - col_mean[j]) * (y[i] - y_mean);
    rhs[j] = s;
  }

  RidgeSolution sol;
  sol.w = solve_linear(G, rhs);
  double shift = 0.0;
  for (int j = 0; j < m; ++j) shift += col_mean[j] * sol.w[j];
  sol.b = y_mean - shift;
  if (!sol.w.all_finite() || !std::isfinite(sol.b))
    throw NumericalError("ridge_fit: non-finite solution");
  return sol;
}

double memory_capacity(const RealVector& yhat, const RealVector& y) {
  const int n = yhat.size();
  if (n != y.size() || n < 2)
    throw ShapeError("memory_capacity: sequences must share a length >= 2");
  const double m1 = mean_of(yhat.v.data(), n);
  const double m2 = mean_of(y.v.data(), n);
  double v1 = 0.0, v2 = 0.0, cov = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = yhat[i] - m1, b = y[i] - m2;
    v1 += a * a;
    v2 += b * b;
    cov += a * b;
  }
  // Degenerate when either sequence is (numerically) constant.
  if (v1 <= 1e-20 * double(n) * (1.0 + m1 * m1) ||
      v2 <= 1e-20 * double(n) * (1.0 + m2 * m2))
    throw DomainError("memory_capacity: zero variance (degenerate capacity)");
  return (cov * cov) / (v1 * v2);
}

//============================================================================
// Short-term memory task
//============================================================================

namespace {

struct RealizationScore {
  double test_c = 0.0;
  double train_c = 0.0;
};

// One end-to-end realization: fresh input streams, drive, fit, score.
RealizationScore run_stm_once(const SasModel& sas, const TaskConfig& cfg,
                              std::uint64_t seed_r) {
  // The washout stream and the data stream are independent, so the data
  // segment (and hence the targets) does not move when washout is extended.
  const std::vector<double> wash =
      gen_uniform_inputs(cfg.washout, 0.0, 1.0, derive_seed(seed_r, 0xA));
  const int seg_len = cfg.n_train + cfg.n_test + 1;
  const std::vector<double> seg =
      gen_uniform_inputs(seg_len, 0.0, 1.0, derive_seed(seed_r, 0xB));

  RealVector x(sas.N);
  for (double z : wash) x = sas.p1(z) * x + sas.q1(z);

  // States over the data segment; row j holds the state after seg[j].
  RealMatrix S(seg_len, sas.N);
  for (int j = 0; j < seg_len; ++j) {
    x = sas.p1(seg[static_cast<size_t>(j)]) * x + sas.q1(seg[static_cast<size_t>(j)]);
    for (int k = 0; k < sas.N; ++k) S.at(j, k) = x[k];
  }
  if (!S.all_finite()) throw NumericalError("stm_task: non-finite state");

  // Target at row j is the previous input seg[j-1]; rows 1..n_train train,
  // the following n_test rows test.
  RealMatrix Xtr(cfg.n_train, sas.N);
  RealVector ytr(cfg.n_train);
  for (int j = 0; j < cfg.n_train; ++j) {
    for (int k = 0; k < sas.N; ++k) Xtr.at(j, k) = S.at(j + 1, k);
    ytr[j] = seg[static_cast<size_t>(j)];
  }
  const RidgeSolution sol = ridge_fit(Xtr, ytr, cfg.lambda);

  auto predict = [&](int row) {
    double p = sol.b;
    for (int k = 0; k < sas.N; ++k) p += S.at(row, k) * sol.w[k];
    return p;
  };

  RealVector pred_tr(cfg.n_train);
  for (int j = 0; j < cfg.n_train; ++j) pred_tr[j] = predict(j + 1);

  RealVector pred_te(cfg.n_test), yte(cfg.n_test);
  for (int j = 0; j < cfg.n_test; ++j) {
    const int row = cfg.n_train + 1 + j;
    pred_te[j] = predict(row);
    yte[j] = seg[static_cast<size_t>(row - 1)];
  }

  RealizationScore sc;
  sc.train_c = memory_capacity(pred_tr, ytr);
  sc.test_c = memory_capacity(pred_te, yte);
  return sc;
}

} // namespace

CapacityResult stm_task(double eps, double g, const TaskConfig& cfg, int jobs) {
  cfg.validate();
  if (eps <= 0.0 || eps >= 1.0) throw DomainError("stm_task: eps must lie in (0, 1)");

  // Inputs live on [0, 1]; the domain covers the encoded angle's argument.
  const ModelBundle mb =
      make_reset_rotation(eps, g, InputDomain::interval(0.0, 1.0));

  CapacityResult res;
  res.realizations = cfg.realizations;
  res.values.assign(static_cast<size_t>(cfg.realizations), 0.0);
  res.train_values.assign(static_cast<size_t>(cfg.realizations), 0.0);

  par::grid_map(
      static_cast<size_t>(cfg.realizations),
      [&](size_t r) {
        const RealizationScore sc =
            run_stm_once(mb.sas, cfg, derive_seed(cfg.seed, r));
        res.values[r] = sc.test_c;
        res.train_values[r] = sc.train_c;
      },
      jobs);

  // Deterministic aggregation in index order.
  res.mean = par::kahan_sum(res.values.data(), res.values.size()) /
             double(cfg.realizations);
  res.train_mean = par::kahan_sum(res.train_values.data(), res.train_values.size()) /
                   double(cfg.realizations);
  if (cfg.realizations > 1) {
    std::vector<double> sq(res.values.size());
    for (size_t i = 0; i < res.values.size(); ++i) {
      const double d = res.values[i] - res.mean;
      sq[i] = d * d;
    }
    res.stddev = std::sqrt(par::kahan_sum(sq.data(), sq.size()) /
                           double(cfg.realizations - 1));
  }
  return res;
}

Fig2Result fig2_sweep(const std::vector<double>& eps_list,
                      const std::vector<double>& g_grid, const TaskConfig& cfg,
                      int jobs) {
  cfg.validate();
  if (eps_list.empty() || g_grid.empty())
    throw DomainError("fig2_sweep: empty epsilon list or g grid");

  Fig2Result out;
  out.rows.resize(eps_list.size() * g_grid.size());

  // Parallel over (eps, g) cells; realizations inside each cell run
  // serially so cell results are independent of the thread count.
  par::grid_map(
      out.rows.size(),
      [&](size_t flat) {
        const size_t ie = flat / g_grid.size(), ig = flat % g_grid.size();
        const CapacityResult cr = stm_task(eps_list[ie], g_grid[ig], cfg, 1);
        out.rows[flat] =
            Fig2Row{eps_list[ie], g_grid[ig], cr.mean, cr.stddev, cr.realizations};
      },
      jobs);
  return out;
}

std::vector<double> default_g_grid() {
  std::vector<double> g;
  const double lo = std::log(0.05), hi = std::log(8.0);
  for (int i = 0; i < 40; ++i)
    g.push_back(std::exp(lo + (hi - lo) * double(i) / 39.0));
  g.push_back(2.0 * M_PI);
  std::sort(g.begin(), g.end());
  return g;
}

} // namespace qsas

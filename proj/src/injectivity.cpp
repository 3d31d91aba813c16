// injectivity.cpp -- finite-difference rank diagnostics, constant-filter
// detection, preimage characterization, and falsification search.

#include "qsas/injectivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "qsas/error.hpp"
#include "qsas/parallel.hpp"
#include "qsas/rng.hpp"

namespace qsas {

//============================================================================
// Derivatives
//============================================================================

DerivativeBundle frechet_pq(const SasModel& sas, const RealVector& z, double h) {
  const int n = sas.n;
  if (z.size() != n) throw ShapeError("frechet_pq: input has wrong dimension");
  if (sas.domain.n() != n)
    throw ShapeError("frechet_pq: domain/input dimension mismatch");

  DerivativeBundle out;
  out.z = z;
  out.h = RealVector(n);
  out.Dp.reserve(static_cast<size_t>(n));
  out.Dq = RealMatrix(sas.N, n);

  for (int k = 0; k < n; ++k) {
    const double hk = h > 0.0 ? h : 1e-6 * std::max(1.0, std::abs(z[k]));
    out.h[k] = hk;

    RealVector zp = z, zm = z;
    zp[k] += hk;
    zm[k] -= hk;

    // One-sided fallback when the stencil would leave the domain.
    const bool clip_lo = zm[k] < sas.domain.lo[static_cast<size_t>(k)];
    const bool clip_hi = zp[k] > sas.domain.hi[static_cast<size_t>(k)];
    double denom = 2.0 * hk;
    if (clip_lo && clip_hi)
      throw DomainError("frechet_pq: domain narrower than the difference step");
    if (clip_lo) {
      zm = z;
      denom = hk;
    } else if (clip_hi) {
      zp = z;
      denom = hk;
    }

    const RealMatrix dp = (1.0 / denom) * (sas.p(zp) - sas.p(zm));
    const RealVector dq = (1.0 / denom) * (sas.q(zp) - sas.q(zm));
    if (!dp.all_finite() || !dq.all_finite())
      throw NumericalError("frechet_pq: non-finite difference along coordinate " +
                           std::to_string(k));
    for (int i = 0; i < sas.N; ++i) out.Dq.at(i, k) = dq[i];
    out.Dp.push_back(dp);
  }
  return out;
}

//============================================================================
// Rank condition
//============================================================================

static RankReport rank_from_bundle(const SasModel& sas, const DerivativeBundle& db,
                                   const RealVector& x, double rel_tol) {
  RankReport rep;
  rep.z = db.z;
  rep.x = x;
  rep.M = RealMatrix(sas.N, sas.n);
  for (int k = 0; k < sas.n; ++k) {
    const RealVector col = db.Dp[static_cast<size_t>(k)] * x;
    for (int i = 0; i < sas.N; ++i) rep.M.at(i, k) = col[i] + db.Dq.at(i, k);
  }
  if (!rep.M.all_finite())
    throw NumericalError("rank_condition: non-finite condition matrix");
  rep.singular_values = singular_values(rep.M);
  rep.min_singular_value = rep.singular_values[rep.singular_values.size() - 1];
  rep.rank = numerical_rank(rep.M, rel_tol);
  rep.pass = rep.rank == sas.n;
  return rep;
}

RankReport rank_condition(const SasModel& sas, const RealVector& z,
                          const RealVector& x, double rel_tol) {
  if (x.size() != sas.N) throw ShapeError("rank_condition: state has wrong dimension");
  return rank_from_bundle(sas, frechet_pq(sas, z), x, rel_tol);
}

RankReport local_injectivity_at_constant(const SasModel& sas, const RealVector& z0,
                                         double rel_tol) {
  return rank_condition(sas, z0, fixed_point(sas, z0), rel_tol);
}

//============================================================================
// Reachable sampling
//============================================================================

// Iterate the affine recursion without re-checking the contraction margin;
// callers establish it once.
static RealVector drive_from_zero(const SasModel& sas,
                                  const std::vector<RealVector>& inputs) {
  RealVector x(sas.N);
  for (const RealVector& z : inputs) x = sas.p(z) * x + sas.q(z);
  return x;
}

// Smallest L with max_norm^L < tol (at least 1).
static int washout_length(double max_norm, double tol) {
  if (max_norm <= 0.0) return 1;
  const int L = static_cast<int>(std::floor(std::log(tol) / std::log(max_norm))) + 1;
  return std::max(L, 1);
}

std::vector<RealVector> reachable_sample(const SasModel& sas, int count,
                                         int seq_len, std::uint64_t seed) {
  if (count < 1) throw DomainError("reachable_sample: count must be positive");
  const EspReport esp = esp_check(sas, uniform_grid(sas.domain, 33), 1);
  if (!esp.pass)
    throw EspViolationError("reachable_sample: contraction margin " +
                            std::to_string(esp.margin) + " is not positive");
  if (seq_len <= 0) seq_len = washout_length(esp.max_norm, 1e-10);

  std::vector<RealVector> samples;
  samples.reserve(static_cast<size_t>(count));
  for (int s = 0; s < count; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::vector<RealVector> seq(static_cast<size_t>(seq_len), RealVector(sas.n));
    for (auto& z : seq)
      for (int k = 0; k < sas.n; ++k)
        z[k] = rng.uniform(sas.domain.lo[static_cast<size_t>(k)],
                           sas.domain.hi[static_cast<size_t>(k)]);
    samples.push_back(drive_from_zero(sas, seq));
  }
  return samples;
}

//============================================================================
// Global scan
//============================================================================

GlobalScanResult global_injectivity_scan(const SasModel& sas,
                                         const std::vector<RealVector>& z_grid,
                                         const std::vector<RealVector>& x_samples,
                                         double rel_tol, int jobs) {
  if (z_grid.empty() || x_samples.empty())
    throw DomainError("global_injectivity_scan: empty grid or sample set");

  GlobalScanResult out;
  const size_t nz = z_grid.size(), nx = x_samples.size();
  out.reports.resize(nz * nx);

  par::grid_map(
      nz * nx,
      [&](size_t flat) {
        const size_t iz = flat / nx, ix = flat % nx;
        // Each (z, x) pair recomputes its own derivative bundle; points are
        // independent so the scan stays deterministic under any schedule.
        out.reports[flat] = rank_condition(sas, z_grid[iz], x_samples[ix], rel_tol);
      },
      jobs);

  ScanSummary& s = out.summary;
  s.n_reports = static_cast<int>(out.reports.size());
  s.all_pass = true;
  s.min_singular_value = std::numeric_limits<double>::infinity();
  for (const RankReport& r : out.reports) {
    s.min_singular_value = std::min(s.min_singular_value, r.min_singular_value);
    if (!r.pass) {
      s.all_pass = false;
      s.failures.push_back(r);
    }
  }
  s.verdict = s.all_pass ? "certified-on-samples" : "failed";
  return out;
}

//============================================================================
// Preimages of constant outputs
//============================================================================

PreimageSet preimage_constant_output(const SasModel& sas, const RealVector& x0,
                                     const std::vector<RealVector>& z_grid,
                                     double tol, std::uint64_t seed) {
  if (x0.size() != sas.N)
    throw ShapeError("preimage_constant_output: target has wrong dimension");
  if (z_grid.empty()) throw DomainError("preimage_constant_output: empty grid");

  const EspReport esp = esp_check(sas, uniform_grid(sas.domain, 33), 1);
  if (!esp.pass)
    throw EspViolationError("preimage_constant_output: contraction margin " +
                            std::to_string(esp.margin) + " is not positive");

  PreimageSet out;
  out.x0 = x0;
  out.tol = tol;

  // Grid preimage of the fixed-point map, with runs of adjacent passing
  // grid points merged into clusters (representative = smallest deviation).
  std::vector<size_t> member_idx;
  for (size_t i = 0; i < z_grid.size(); ++i) {
    const double dev = (fixed_point(sas, z_grid[i]) - x0).norm2();
    if (dev < tol) {
      member_idx.push_back(i);
      out.members.push_back(z_grid[i]);
      out.deviations.push_back(dev);
    }
  }
  size_t run_start = 0;
  for (size_t m = 0; m < member_idx.size(); ++m) {
    const bool run_ends = m + 1 == member_idx.size() ||
                          member_idx[m + 1] != member_idx[m] + 1;
    if (run_ends) {
      size_t best = run_start;
      for (size_t j = run_start; j <= m; ++j)
        if (out.deviations[j] < out.deviations[best]) best = j;
      out.cluster_reps.push_back(out.members[best]);
      run_start = m + 1;
    }
  }

  if (out.empty()) return out; // reported, not an error

  // Dynamic validation: sequences mixing preimage members must hold the
  // filter at x0 (within tol) once the washout has decayed.
  const int washout = washout_length(esp.max_norm, tol);
  const int total = washout + 30;
  out.sequence_check_pass = true;
  out.sequence_max_dev = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
    RealVector x(sas.N);
    for (int t = 0; t < total; ++t) {
      const size_t pick =
          std::min(static_cast<size_t>(rng.uniform() * double(out.members.size())),
                   out.members.size() - 1);
      const RealVector& z = out.members[pick];
      x = sas.p(z) * x + sas.q(z);
      if (t >= washout) {
        const double dev = (x - x0).norm2();
        out.sequence_max_dev = std::max(out.sequence_max_dev, dev);
        if (dev >= tol) out.sequence_check_pass = false;
      }
    }
  }
  return out;
}

//============================================================================
// Constant-filter detection
//============================================================================

static double max_pairwise_deviation(const std::vector<RealVector>& pts) {
  double dev = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      dev = std::max(dev, (pts[i] - pts[j]).norm2());
  return dev;
}

ConstantFilterReport constant_filter_check(const SasModel& sas,
                                           const std::vector<RealVector>& z_grid,
                                           double tol,
                                           const ContractedEncoding* split) {
  if (z_grid.empty()) throw DomainError("constant_filter_check: empty grid");
  const EspReport esp = esp_check(sas, uniform_grid(sas.domain, 33), 1);
  if (!esp.pass)
    throw EspViolationError("constant_filter_check: contraction margin " +
                            std::to_string(esp.margin) + " is not positive");

  ConstantFilterReport rep;
  rep.grid = z_grid;
  rep.fixed_points.reserve(z_grid.size());
  for (const RealVector& z : z_grid) rep.fixed_points.push_back(fixed_point(sas, z));
  rep.max_deviation = max_pairwise_deviation(rep.fixed_points);
  rep.constant = rep.max_deviation < tol;
  rep.verdict = rep.constant ? "constant" : "input-dependent";

  const int d = split != nullptr
                    ? split->E.d
                    : static_cast<int>(std::lround(std::sqrt(double(sas.N + 1))));
  const GellMannBasis basis = GellMannBasis::make(d);
  const size_t ref = z_grid.size() / 2;
  rep.rho_star_T = from_bloch(rep.fixed_points[ref], basis);

  if (split != nullptr) {
    rep.has_split = true;

    // Fixed point of the outer channel alone, via its own affine model.
    const RealMatrix that_e = extract_superop(split->E, basis);
    const int N = sas.N;
    RealMatrix pe(N, N);
    RealVector qe(N);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) pe.at(i, j) = that_e.at(i + 1, j + 1);
      qe[i] = that_e.at(i + 1, 0) / std::sqrt(double(d));
    }
    rep.rho_star_E =
        from_bloch(solve_linear(RealMatrix::identity(N) - pe, qe), basis);

    // Encoded fixed point over a handful of sampled inputs: its spread is
    // the input-independence defect; a unitary gate also yields the
    // commutator residual with the fixed point.
    const size_t stride = std::max<size_t>(1, z_grid.size() / 5);
    std::vector<ComplexMatrix> primes;
    double comm = -1.0;
    for (size_t i = 0; i < z_grid.size(); i += stride) {
      const Channel j_at = split->J.at(z_grid[i]);
      primes.push_back(j_at.apply_linear(rep.rho_star_T));
      if (split->has_gate) {
        const ComplexMatrix U = split->gate(z_grid[i]);
        comm = std::max(comm, trace_norm(rep.rho_star_T * U - U * rep.rho_star_T));
      }
    }
    rep.rho_prime = primes.front();
    for (size_t i = 0; i < primes.size(); ++i)
      for (size_t j = i + 1; j < primes.size(); ++j)
        rep.rho_prime_defect =
            std::max(rep.rho_prime_defect, trace_norm(primes[i] - primes[j]));
    rep.commutator_residual = comm;
  }
  return rep;
}

EncodingFixedPointReport encoding_preserves_fixed_point(
    const Channel& E, const ParamChannel& J, const std::vector<RealVector>& z_grid) {
  if (z_grid.empty())
    throw DomainError("encoding_preserves_fixed_point: empty grid");
  if (E.d != J.d)
    throw ShapeError("encoding_preserves_fixed_point: dimension mismatch");

  EncodingFixedPointReport rep;

  // Strict-contractivity precondition, sampled: trace-norm ratios on 100
  // random state pairs must sit strictly below 1.
  rep.contraction_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix r1 = random_density(E.d, derive_seed(0xE5C0u, 2 * i));
    const DensityMatrix r2 = random_density(E.d, derive_seed(0xE5C0u, 2 * i + 1));
    const double den = trace_norm(r1.m - r2.m);
    if (den < 1e-14) continue;
    const double num = trace_norm(E.apply_linear(r1.m) - E.apply_linear(r2.m));
    rep.contraction_ratio = std::max(rep.contraction_ratio, num / den);
  }
  if (rep.contraction_ratio >= 1.0 - 1e-6)
    throw DomainError(
        "encoding_preserves_fixed_point: outer channel is not strictly "
        "contractive (sampled ratio " +
        std::to_string(rep.contraction_ratio) + ")");

  const GellMannBasis basis = GellMannBasis::make(E.d);
  const RealMatrix that_e = extract_superop(E, basis);
  const int N = E.d * E.d - 1;
  RealMatrix pe(N, N);
  RealVector qe(N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) pe.at(i, j) = that_e.at(i + 1, j + 1);
    qe[i] = that_e.at(i + 1, 0) / std::sqrt(double(E.d));
  }
  rep.rho_star_E = from_bloch(solve_linear(RealMatrix::identity(N) - pe, qe), basis);

  rep.max_defect = 0.0;
  for (const RealVector& z : z_grid) {
    const ComplexMatrix moved = J.at(z).apply_linear(rep.rho_star_E);
    rep.max_defect = std::max(rep.max_defect, trace_norm(moved - rep.rho_star_E));
  }
  rep.holds = rep.max_defect < 1e-9;
  return rep;
}

//============================================================================
// Counterexample search
//============================================================================

std::optional<CounterexampleWitness> counterexample_search(
    const SasModel& sas, const PairGenerator& gen, int trials, double tol_in,
    double tol_out, std::uint64_t seed, int jobs) {
  if (sas.n != 1)
    throw DomainError("counterexample_search: scalar-input models only");
  if (trials < 1) throw DomainError("counterexample_search: trials must be positive");

  const EspReport esp = esp_check(sas, uniform_grid(sas.domain, 33), 1);
  if (!esp.pass)
    throw EspViolationError("counterexample_search: contraction margin " +
                            std::to_string(esp.margin) + " is not positive");

  std::vector<std::optional<CounterexampleWitness>> hits(
      static_cast<size_t>(trials));

  par::grid_map(
      static_cast<size_t>(trials),
      [&](size_t t) {
        Rng rng(derive_seed(seed, t));
        auto [a, b] = gen(rng);
        if (a.size() != b.size() || a.empty()) return;

        double in_dist = 0.0;
        for (size_t i = 0; i < a.size(); ++i)
          in_dist = std::max(in_dist, std::abs(a[i] - b[i]));
        if (in_dist <= tol_in) return; // not a distinct pair

        // Both trajectories share the zero start, so any divergence is
        // purely input-driven; compare at every step.
        RealVector xa(sas.N), xb(sas.N);
        double out_dist = 0.0;
        for (size_t i = 0; i < a.size(); ++i) {
          xa = sas.p1(a[i]) * xa + sas.q1(a[i]);
          xb = sas.p1(b[i]) * xb + sas.q1(b[i]);
          out_dist = std::max(out_dist, (xa - xb).norm2());
          if (out_dist >= tol_out) return; // already distinguishable
        }
        hits[t] = CounterexampleWitness{a, b, in_dist, out_dist};
      },
      jobs);

  for (auto& h : hits)
    if (h.has_value()) return h;
  return std::nullopt;
}

//============================================================================
// Dissipation-vs-input scan
//============================================================================

Fig1Result fig1_scan(const std::vector<double>& gamma_grid,
                     const std::vector<double>& z_grid, double dtau,
                     bool quadratic, int jobs) {
  if (gamma_grid.empty() || z_grid.empty())
    throw DomainError("fig1_scan: empty grid");
  for (double g : gamma_grid)
    if (!(g > 0.0)) throw DomainError("fig1_scan: gamma must be positive");

  Fig1Result out;
  out.gamma_grid = gamma_grid;
  out.z_grid = z_grid;
  out.points.resize(gamma_grid.size() * z_grid.size());

  const GellMannBasis basis = GellMannBasis::make(2);
  double zlo = z_grid.front(), zhi = z_grid.front();
  for (double z : z_grid) {
    zlo = std::min(zlo, z);
    zhi = std::max(zhi, z);
  }
  // Pad the domain so central differences stay interior at the edges.
  const InputDomain dom = InputDomain::interval(zlo - 0.01, zhi + 0.01);

  par::grid_map(
      out.points.size(),
      [&](size_t flat) {
        const size_t ig = flat / z_grid.size(), iz = flat % z_grid.size();
        const double gamma = gamma_grid[ig];
        const double z = z_grid[iz];
        Fig1Point& pt = out.points[flat];
        pt.gamma = gamma;
        pt.z = z;
        try {
          const LindbladModel model = quadratic
                                          ? LindbladModel::make_quadratic(gamma, dtau)
                                          : LindbladModel::make(gamma, dtau);
          ParamChannel pch;
          pch.d = 2;
          pch.domain = dom;
          pch.builder = [model](const RealVector& zz) {
            return lindblad_step_channel(model, zz[0]);
          };
          const SasModel sas = extract_sas(pch, basis);
          const RankReport rr = local_injectivity_at_constant(sas, RealVector{z});
          pt.norm = 0.0;
          for (int i = 0; i < rr.M.rows; ++i) pt.norm += rr.M.at(i, 0) * rr.M.at(i, 0);
          pt.norm = std::sqrt(pt.norm);
          pt.min_singular_value = rr.min_singular_value;
          pt.rank = rr.rank;

          // Closed-form steady state of the continuous dynamics: with the
          // effective drive w (= z, or z^2 for the quadratic encoding) and
          // u = 2w^2 + gamma^2, the coordinates are
          //   (0, -2 w gamma / u, -gamma^2 / u) / sqrt(2).
          const double w = quadratic ? z * z : z;
          const double u = 2.0 * w * w + gamma * gamma;
          const RealVector analytic{0.0, -2.0 * w * gamma / (u * std::sqrt(2.0)),
                                    -gamma * gamma / (u * std::sqrt(2.0))};
          pt.residual = (fixed_point(sas, RealVector{z}) - analytic).norm2();
          pt.ok = true;
        } catch (const Error& e) {
          pt.ok = false;
          pt.error = e.what();
          pt.norm = pt.min_singular_value = pt.residual =
              std::numeric_limits<double>::quiet_NaN();
          pt.rank = -1;
        }
      },
      jobs);

  return out;
}

} // namespace qsas

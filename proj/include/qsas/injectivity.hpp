// injectivity.hpp -- rank-based injectivity diagnostics for SAS filters.
//
// For a contraction-driven filter x_t = p(z_t) x_{t-1} + q(z_t), local
// injectivity in the input at a state x hinges on the N x n condition
// matrix with columns
//     M_k = (D_k p)(z) x + (D_k q)(z),   k = 1..n,
// where D_k denotes the derivative along input coordinate k.  Full column
// rank n at every reachable x and admissible z makes the one-step update
// injective in z there; rank deficits flag inputs the filter cannot
// distinguish.  This module computes the derivatives by finite differences,
// evaluates the rank condition on grids and sampled reachable states,
// detects constant filters via their fixed-point map, characterizes
// constant-output preimages, and searches empirically for pairs of distinct
// input sequences with indistinguishable outputs.

#ifndef QSAS_INJECTIVITY_HPP
#define QSAS_INJECTIVITY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsas/rng.hpp"
#include "qsas/sas.hpp"

namespace qsas {

//============================================================================
// Derivatives and rank reports
//============================================================================

struct DerivativeBundle {
  RealVector z;             // evaluation point
  std::vector<RealMatrix> Dp; // n slices, each N x N
  RealMatrix Dq;            // N x n Jacobian of q
  RealVector h;             // per-coordinate step actually used
};

// Finite-difference derivatives of p and q at z.  Central differences with
// step h_k = 1e-6 * max(1, |z_k|) by default (h > 0 overrides all
// coordinates); falls back to one-sided differences when z is within h of
// the domain boundary.  Throws NumericalError (naming the coordinate) on
// non-finite evaluations.
DerivativeBundle frechet_pq(const SasModel& sas, const RealVector& z, double h = 0.0);

struct RankReport {
  RealVector z;
  RealVector x;
  RealMatrix M;              // N x n condition matrix
  RealVector singular_values; // descending
  double min_singular_value = 0.0;
  int rank = 0;
  bool pass = false; // rank == n
};

// Build M column-wise as Dp_k(z) x + Dq_k(z) and rank it.  pass certifies
// full column rank at this (z, x) only; grids of these are evidence, not
// proof.
RankReport rank_condition(const SasModel& sas, const RealVector& z,
                          const RealVector& x, double rel_tol = 1e-10);

// Rank condition evaluated at x = fixed_point(sas, z0): the constant-input
// local-injectivity certificate.  Throws SingularMatrixError when I - p(z0)
// is singular.
RankReport local_injectivity_at_constant(const SasModel& sas, const RealVector& z0,
                                         double rel_tol = 1e-10);

//============================================================================
// Reachable-set sampling and global scans
//============================================================================

// End states of `count` random input sequences (uniform over the domain),
// each long enough that the initial-condition influence is below 1e-10.
// seq_len <= 0 derives the length from the contraction margin.
// Deterministic per seed; throws EspViolationError when the sampled margin
// is not positive.
std::vector<RealVector> reachable_sample(const SasModel& sas, int count,
                                         int seq_len, std::uint64_t seed);

struct ScanSummary {
  std::string verdict; // "certified-on-samples" | "failed"
  bool all_pass = false;
  int n_reports = 0;
  double min_singular_value = 0.0; // over all reports
  std::vector<RankReport> failures;
};

struct GlobalScanResult {
  std::vector<RankReport> reports; // z-major, then x-sample order
  ScanSummary summary;
};

// Rank condition over the cartesian product z_grid x x_samples.  jobs as in
// esp_check.
GlobalScanResult global_injectivity_scan(const SasModel& sas,
                                         const std::vector<RealVector>& z_grid,
                                         const std::vector<RealVector>& x_samples,
                                         double rel_tol = 1e-10, int jobs = 1);

//============================================================================
// Constant filters and preimages
//============================================================================

struct PreimageSet {
  RealVector x0;
  double tol = 0.0;
  std::vector<RealVector> members;     // grid points with ||x*(z) - x0|| < tol
  std::vector<double> deviations;      // matching ||x*(z) - x0||
  std::vector<RealVector> cluster_reps; // one per run of adjacent members
  bool sequence_check_pass = true;     // vacuously true when empty
  double sequence_max_dev = 0.0;

  bool empty() const { return members.empty(); }
};

// Grid preimage of x0 under the fixed-point map, clustered by grid
// adjacency, then validated dynamically: 20 random sequences with entries
// drawn from the preimage must keep the filter within tol of x0 at every
// step after washout.  An empty preimage is reported, not an error.
PreimageSet preimage_constant_output(const SasModel& sas, const RealVector& x0,
                                     const std::vector<RealVector>& z_grid,
                                     double tol = 1e-8, std::uint64_t seed = 7);

// Optional factorization T = E o J(., z) of a parameterized channel into an
// input-independent outer channel E after an input-dependent encoding J.
// When J is conjugation by a unitary, `gate` supplies U(z) so commutator
// residuals can be reported.
struct ContractedEncoding {
  Channel E;
  ParamChannel J;
  std::function<ComplexMatrix(const RealVector&)> gate; // optional U(z)
  bool has_gate = false;
};

struct ConstantFilterReport {
  std::vector<RealVector> grid;
  std::vector<RealVector> fixed_points;
  double max_deviation = 0.0; // max pairwise ||x*(z) - x*(z')||
  bool constant = false;
  std::string verdict; // "constant" | "input-dependent"

  // Densities (always): the fixed point at the reference input, as a matrix.
  ComplexMatrix rho_star_T;

  // Populated when a contracted-encoding split is provided:
  bool has_split = false;
  ComplexMatrix rho_star_E;          // fixed point of E alone
  ComplexMatrix rho_prime;           // J(rho_star_T, v) at the reference input
  double rho_prime_defect = 0.0;     // max pairwise trace-norm spread of
                                     // J(rho_star_T, v) over sampled v
  double commutator_residual = -1.0; // max_v ||[rho_star_T, U(v)]||_1 when a
                                     // gate is supplied, else -1
};

// Fixed-point map over the grid; verdict "constant" iff the max pairwise
// deviation is below tol.  Throws EspViolationError when the sampled
// contraction margin is not positive.
ConstantFilterReport constant_filter_check(const SasModel& sas,
                                           const std::vector<RealVector>& z_grid,
                                           double tol = 1e-8,
                                           const ContractedEncoding* split = nullptr);

struct EncodingFixedPointReport {
  bool holds = false;          // max_defect < 1e-9
  double max_defect = 0.0;     // max over grid of ||J(rho*_E, v) - rho*_E||_1
  double contraction_ratio = 0.0; // max sampled trace-norm ratio of E
  ComplexMatrix rho_star_E;
};

// Sufficient condition for a constant filter of E o J: the fixed point of E
// is fixed by every encoding J(., v).  The condition is not necessary --
// filters can be constant while it fails.  Preconditions: E strictly
// contractive in trace norm, validated on 100 random state pairs
// (threshold ratio < 1 - 1e-6, DomainError otherwise).
EncodingFixedPointReport encoding_preserves_fixed_point(
    const Channel& E, const ParamChannel& J, const std::vector<RealVector>& z_grid);

//============================================================================
// Empirical injectivity falsification
//============================================================================

struct CounterexampleWitness {
  std::vector<double> a;
  std::vector<double> b;
  double in_dist = 0.0;  // ||a - b||_inf
  double out_dist = 0.0; // max_t ||x_t(a) - x_t(b)||_2
};

// Proposes a pair of scalar input sequences per trial.
using PairGenerator =
    std::function<std::pair<std::vector<double>, std::vector<double>>(Rng&)>;

// Search for distinct input sequences (in_dist > tol_in) whose filter
// trajectories from the zero-washed start coincide within tol_out at every
// step.  Trials are independent and seeded per index, so the result is
// deterministic for a given seed and trial count regardless of jobs; the
// first witness in trial order is returned.
std::optional<CounterexampleWitness> counterexample_search(
    const SasModel& sas, const PairGenerator& gen, int trials, double tol_in,
    double tol_out, std::uint64_t seed, int jobs = 1);

//============================================================================
// Dissipation-vs-input scan for the single-qubit master-equation family
//============================================================================

struct Fig1Point {
  double gamma = 0.0;
  double z = 0.0;
  double norm = 0.0;     // Euclidean norm of the n=1 condition column
  double min_singular_value = 0.0;
  double residual = 0.0; // distance of x*(z) to the closed-form fixed point
  int rank = 0;
  bool ok = true;
  std::string error;
};

struct Fig1Result {
  std::vector<double> gamma_grid;
  std::vector<double> z_grid;
  std::vector<Fig1Point> points; // gamma-major, z fastest
};

// For each (gamma, z): integrate the dissipative qubit for one unit step,
// extract the SAS model, and evaluate the constant-input rank condition at
// the fixed point.  `quadratic` switches the drive Hamiltonian from
// z sigma_x/2 to z^2 sigma_x/2.  Per-point errors are recorded and the scan
// continues.
Fig1Result fig1_scan(const std::vector<double>& gamma_grid,
                     const std::vector<double>& z_grid, double dtau = 1.0,
                     bool quadratic = false, int jobs = 1);

} // namespace qsas

#endif // QSAS_INJECTIVITY_HPP

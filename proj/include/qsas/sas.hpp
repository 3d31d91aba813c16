// sas.hpp -- state-affine representation of parameterized channels.
//
// A channel T(., z) acting on density matrices becomes, in an orthonormal
// Hermitian basis {B_1 = I/sqrt(d), B_2..B_{d^2}}, the affine recursion
//     x_t = p(z_t) x_{t-1} + q(z_t)
// on Bloch coordinates x_i = tr(B_{i+1} rho).  The transfer matrix
// That_ij = tr(B_i T(B_j, z)) has first row (1, 0, ..., 0) for any
// trace-preserving map; its lower-right block is p(z) and its first column
// below the 1 is tr(B_i T(I,z))/sqrt(d).  Note the affine offset in the
// coordinates above is that column divided by another sqrt(d):
//     q(z)_i = tr(B_{i+1} T(I, z)) / d,
// which is what makes to_bloch(T(rho)) = p to_bloch(rho) + q hold exactly.

#ifndef QSAS_SAS_HPP
#define QSAS_SAS_HPP

#include <functional>
#include <string>
#include <vector>

#include "qsas/quantum.hpp"

namespace qsas {

//============================================================================
// Generalized Gell-Mann basis
//============================================================================

struct GellMannBasis {
  int d = 0;
  std::vector<ComplexMatrix> elements; // d^2 entries, first = I/sqrt(d)

  static GellMannBasis make(int d);
};

// Bloch coordinates x_i = tr(B_{i+1} rho), length d^2-1.
RealVector to_bloch(const DensityMatrix& rho, const GellMannBasis& basis);
RealVector to_bloch(const ComplexMatrix& hermitian_op, const GellMannBasis& basis);

// Hermitian unit-trace matrix I/d + sum_i x_i B_{i+1}.  Positivity is NOT
// guaranteed for arbitrary x; call DensityMatrix::validated on the result
// when a state is required.
ComplexMatrix from_bloch(const RealVector& x, const GellMannBasis& basis);

//============================================================================
// SAS models
//============================================================================

// Transfer matrix That_ij = tr(B_i T(B_j)) (d^2 x d^2, real for Hermitian
// bases).  Throws DomainError when the first row deviates from (1,0,...,0)
// by more than 1e-10, which signals a non-trace-preserving input.
RealMatrix extract_superop(const Channel& ch, const GellMannBasis& basis);

enum class SasProvenance { extracted, closed_form };

struct SasModel {
  int n = 1;          // input dimension
  int N = 3;          // state dimension d^2 - 1
  InputDomain domain; // bounds of D_n
  std::function<RealMatrix(const RealVector&)> p;
  std::function<RealVector(const RealVector&)> q;
  SasProvenance provenance = SasProvenance::closed_form;

  // Scalar-input conveniences.
  RealMatrix p1(double z) const { return p(RealVector{z}); }
  RealVector q1(double z) const { return q(RealVector{z}); }
};

// Build the SAS model of a parameterized channel by basis extraction.
SasModel extract_sas(const ParamChannel& pch, const GellMannBasis& basis);

//============================================================================
// Grids
//============================================================================

// Uniform grid over the domain: `points` samples per axis, cartesian
// product across axes (ordering: last axis fastest).
std::vector<RealVector> uniform_grid(const InputDomain& domain, int points);

// Scalar helper for 1-dimensional domains.
std::vector<double> uniform_grid_1d(double lo, double hi, int points);

//============================================================================
// Echo-state diagnostics and filters
//============================================================================

struct EspReport {
  std::vector<RealVector> grid;
  std::vector<double> norms; // spectral norm of p(z) per grid point
  double max_norm = 0.0;
  double margin = 0.0; // 1 - max_norm
  bool pass = false;   // margin > 0
};

// Spectral norm of p over the grid; pass iff the margin is positive.  A
// passing check certifies the contraction hypothesis; a failing one is
// inconclusive for other operator norms.  jobs: 1 = serial reference,
// otherwise OpenMP.
EspReport esp_check(const SasModel& sas, const std::vector<RealVector>& grid,
                    int jobs = 1);

struct FilterResult {
  std::vector<RealVector> states; // x_t for each input, oldest first
  int washout = 0;                // indices >= washout are x_0-independent
  double max_p_norm = 0.0;        // measured over the ESP grid
};

// Iterate x_t = p(z_t) x_{t-1} + q(z_t) from x = 0 over the inputs (oldest
// first).  The washout length L is chosen so max_p_norm^L < tol.  Throws
// EspViolationError when the sampled contraction margin is not positive.
FilterResult filter_eval(const SasModel& sas, const std::vector<RealVector>& inputs,
                         double tol = 1e-10);
FilterResult filter_eval(const SasModel& sas, const std::vector<double>& inputs,
                         double tol = 1e-10);

// Unique fixed point x* = (I - p(z))^{-1} q(z); throws SingularMatrixError
// when I - p(z) is singular (no unique fixed point).
RealVector fixed_point(const SasModel& sas, const RealVector& z);
RealVector fixed_point(const SasModel& sas, double z);

} // namespace qsas

#endif // QSAS_SAS_HPP

// sas.cpp -- Gell-Mann bases, affine extraction, filters, fixed points.

#include "qsas/sas.hpp"

#include <cmath>
#include <utility>

#include "qsas/error.hpp"
#include "qsas/parallel.hpp"

namespace qsas {

//============================================================================
// Generalized Gell-Mann basis
//============================================================================

GellMannBasis GellMannBasis::make(int d) {
  if (d < 2) throw DomainError("GellMannBasis: dimension must be >= 2");
  GellMannBasis basis;
  basis.d = d;
  basis.elements.reserve(static_cast<size_t>(d) * d);

  // B_1 = I/sqrt(d): the unique basis element with nonzero trace.
  ComplexMatrix b1 = ComplexMatrix::identity(d);
  basis.elements.push_back(cplx(1.0 / std::sqrt(double(d))) * b1);

  // Off-diagonal pairs: (|j><k| + |k><j|)/sqrt(2) and i(|k><j| - |j><k|)/sqrt(2).
  // For d = 2 this yields sigma_x/sqrt(2), sigma_y/sqrt(2) in that order.
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix sym(d, d);
      sym.at(j, k) = r;
      sym.at(k, j) = r;
      basis.elements.push_back(sym);

      ComplexMatrix anti(d, d);
      anti.at(j, k) = cplx(0.0, -r);
      anti.at(k, j) = cplx(0.0, r);
      basis.elements.push_back(anti);
    }
  }

  // Diagonal elements: for l = 1..d-1,
  //   (|0><0| + ... + |l-1><l-1| - l |l><l|) / sqrt(l(l+1)),
  // which for d = 2 is sigma_z/sqrt(2).
  for (int l = 1; l < d; ++l) {
    ComplexMatrix diag(d, d);
    const double s = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int j = 0; j < l; ++j) diag.at(j, j) = s;
    diag.at(l, l) = -double(l) * s;
    basis.elements.push_back(diag);
  }

  return basis;
}

//============================================================================
// Bloch coordinates
//============================================================================

static double real_hs_inner(const ComplexMatrix& B, const ComplexMatrix& A) {
  // tr(B A) for Hermitian B; the imaginary part is numerical noise when A
  // is Hermitian too, so we keep only the real part.
  cplx t = 0.0;
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) t += B.at(i, j) * A.at(j, i);
  return t.real();
}

RealVector to_bloch(const ComplexMatrix& hermitian_op, const GellMannBasis& basis) {
  if (hermitian_op.rows != basis.d || hermitian_op.cols != basis.d)
    throw ShapeError("to_bloch: operator dimension does not match basis");
  const int N = basis.d * basis.d - 1;
  RealVector x(N);
  for (int i = 0; i < N; ++i)
    x[i] = real_hs_inner(basis.elements[static_cast<size_t>(i) + 1], hermitian_op);
  return x;
}

RealVector to_bloch(const DensityMatrix& rho, const GellMannBasis& basis) {
  return to_bloch(rho.m, basis);
}

ComplexMatrix from_bloch(const RealVector& x, const GellMannBasis& basis) {
  const int N = basis.d * basis.d - 1;
  if (x.size() != N)
    throw ShapeError("from_bloch: coordinate vector has wrong length");
  // I/d accounts for the fixed coefficient 1/sqrt(d) on B_1 = I/sqrt(d).
  ComplexMatrix M = cplx(1.0 / basis.d) * ComplexMatrix::identity(basis.d);
  for (int i = 0; i < N; ++i)
    M = M + cplx(x[i]) * basis.elements[static_cast<size_t>(i) + 1];
  return M;
}

//============================================================================
// Affine extraction
//============================================================================

RealMatrix extract_superop(const Channel& ch, const GellMannBasis& basis) {
  if (ch.d != basis.d)
    throw ShapeError("extract_superop: channel dimension does not match basis");
  const int n2 = basis.d * basis.d;
  RealMatrix that(n2, n2);
  for (int j = 0; j < n2; ++j) {
    const ComplexMatrix img = ch.apply_linear(basis.elements[static_cast<size_t>(j)]);
    for (int i = 0; i < n2; ++i)
      that.at(i, j) = real_hs_inner(basis.elements[static_cast<size_t>(i)], img);
  }
  // Trace preservation forces the first row to be (1, 0, ..., 0): the image
  // of B_1 keeps trace sqrt(d) and traceless inputs stay traceless.
  double defect = std::abs(that.at(0, 0) - 1.0);
  for (int j = 1; j < n2; ++j) defect = std::max(defect, std::abs(that.at(0, j)));
  if (defect > 1e-10)
    throw DomainError("extract_superop: first row defect " + std::to_string(defect) +
                      " -- channel is not trace-preserving");
  return that;
}

SasModel extract_sas(const ParamChannel& pch, const GellMannBasis& basis) {
  if (pch.d != basis.d)
    throw ShapeError("extract_sas: channel dimension does not match basis");
  SasModel sas;
  sas.n = pch.domain.n();
  sas.N = basis.d * basis.d - 1;
  sas.domain = pch.domain;
  sas.provenance = SasProvenance::extracted;

  const double inv_sqrt_d = 1.0 / std::sqrt(double(basis.d));
  const int N = sas.N;

  sas.p = [pch, basis, N](const RealVector& z) {
    const RealMatrix that = extract_superop(pch.at(z), basis);
    RealMatrix p(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) p.at(i, j) = that.at(i + 1, j + 1);
    return p;
  };
  sas.q = [pch, basis, N, inv_sqrt_d](const RealVector& z) {
    const RealMatrix that = extract_superop(pch.at(z), basis);
    RealVector q(N);
    // That column 0 is tr(B_i T(B_1)) = tr(B_i T(I))/sqrt(d); dividing by
    // sqrt(d) again gives the affine offset in Bloch coordinates.
    for (int i = 0; i < N; ++i) q[i] = that.at(i + 1, 0) * inv_sqrt_d;
    return q;
  };
  return sas;
}

//============================================================================
// Grids
//============================================================================

std::vector<double> uniform_grid_1d(double lo, double hi, int points) {
  if (points < 1) throw DomainError("uniform_grid_1d: need at least one point");
  std::vector<double> g(static_cast<size_t>(points));
  if (points == 1) {
    g[0] = 0.5 * (lo + hi);
    return g;
  }
  for (int i = 0; i < points; ++i)
    g[static_cast<size_t>(i)] = lo + (hi - lo) * double(i) / double(points - 1);
  return g;
}

std::vector<RealVector> uniform_grid(const InputDomain& domain, int points) {
  const int n = domain.n();
  if (n < 1) throw DomainError("uniform_grid: empty domain");
  std::vector<std::vector<double>> axes;
  axes.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k)
    axes.push_back(uniform_grid_1d(domain.lo[static_cast<size_t>(k)],
                                   domain.hi[static_cast<size_t>(k)], points));
  size_t total = 1;
  for (const auto& ax : axes) total *= ax.size();

  std::vector<RealVector> grid;
  grid.reserve(total);
  for (size_t flat = 0; flat < total; ++flat) {
    RealVector z(n);
    size_t rem = flat;
    for (int k = n - 1; k >= 0; --k) { // last axis fastest
      const size_t m = axes[static_cast<size_t>(k)].size();
      z[k] = axes[static_cast<size_t>(k)][rem % m];
      rem /= m;
    }
    grid.push_back(std::move(z));
  }
  return grid;
}

//============================================================================
// Echo-state diagnostics
//============================================================================

EspReport esp_check(const SasModel& sas, const std::vector<RealVector>& grid,
                    int jobs) {
  if (grid.empty()) throw DomainError("esp_check: empty grid");
  EspReport rep;
  rep.grid = grid;
  rep.norms.assign(grid.size(), 0.0);

  // Independent per-point kernel; slot writes keep the result deterministic.
  par::grid_map(
      grid.size(),
      [&](size_t i) { rep.norms[i] = spectral_norm(sas.p(grid[i])); }, jobs);

  rep.max_norm = 0.0;
  for (double nrm : rep.norms) rep.max_norm = std::max(rep.max_norm, nrm);
  rep.margin = 1.0 - rep.max_norm;
  rep.pass = rep.margin > 0.0;
  return rep;
}

FilterResult filter_eval(const SasModel& sas, const std::vector<RealVector>& inputs,
                         double tol) {
  if (!(tol > 0.0) || tol >= 1.0)
    throw DomainError("filter_eval: truncation tolerance must lie in (0, 1)");
  // Sample the contraction factor on a modest grid; the washout length is a
  // bound derived from it, so a margin <= 0 makes the filter ill-defined.
  const EspReport esp = esp_check(sas, uniform_grid(sas.domain, 33), 1);
  if (!esp.pass)
    throw EspViolationError("filter_eval: contraction margin " +
                            std::to_string(esp.margin) + " is not positive");

  FilterResult out;
  out.max_p_norm = esp.max_norm;
  // Smallest L with max_norm^L < tol: initial-condition influence decays at
  // least geometrically with ratio max_norm.
  if (esp.max_norm <= 0.0) {
    out.washout = 1;
  } else {
    out.washout = static_cast<int>(std::floor(std::log(tol) / std::log(esp.max_norm))) + 1;
    out.washout = std::max(out.washout, 0);
  }

  RealVector x(sas.N); // zero-washed start
  out.states.reserve(inputs.size());
  for (const RealVector& z : inputs) {
    x = sas.p(z) * x + sas.q(z);
    if (!x.all_finite())
      throw NumericalError("filter_eval: non-finite state encountered");
    out.states.push_back(x);
  }
  return out;
}

FilterResult filter_eval(const SasModel& sas, const std::vector<double>& inputs,
                         double tol) {
  std::vector<RealVector> lifted;
  lifted.reserve(inputs.size());
  for (double z : inputs) lifted.push_back(RealVector{z});
  return filter_eval(sas, lifted, tol);
}

//============================================================================
// Fixed points
//============================================================================

RealVector fixed_point(const SasModel& sas, const RealVector& z) {
  const RealMatrix p = sas.p(z);
  const RealVector q = sas.q(z);
  const RealMatrix A = RealMatrix::identity(sas.N) - p;
  try {
    return solve_linear(A, q);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError(
        "fixed_point: I - p(z) is singular, no unique fixed point at this input", -1);
  }
}

RealVector fixed_point(const SasModel& sas, double z) {
  return fixed_point(sas, RealVector{z});
}

} // namespace qsas

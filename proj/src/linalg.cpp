// linalg.cpp -- implementations of the small dense kernels.

#include "qsas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsas {

//============================================================================
// ComplexMatrix
//============================================================================

ComplexMatrix::ComplexMatrix(int r, int c, std::initializer_list<cplx> entries)
    : rows(r), cols(c), a(entries) {
  if (static_cast<int>(a.size()) != r * c)
    throw ShapeError("ComplexMatrix initializer size does not match shape");
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix I(n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1.0;
  return I;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix R(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) R.at(j, i) = std::conj(at(i, j));
  return R;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix R(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) R.at(j, i) = at(i, j);
  return R;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix R(rows, cols);
  for (size_t k = 0; k < a.size(); ++k) R.a[k] = std::conj(a[k]);
  return R;
}

cplx ComplexMatrix::trace() const {
  if (!is_square()) throw ShapeError("trace requires a square matrix");
  cplx t = 0.0;
  for (int i = 0; i < rows; ++i) t += at(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : a) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermitian_defect() const {
  if (!is_square()) throw ShapeError("hermitian_defect requires a square matrix");
  double m = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const cplx& z : a)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

static void check_same_shape(const ComplexMatrix& A, const ComplexMatrix& B,
                             const char* what) {
  if (A.rows != B.rows || A.cols != B.cols)
    throw ShapeError(std::string(what) + ": shape mismatch");
}

ComplexMatrix operator+(const ComplexMatrix& A, const ComplexMatrix& B) {
  check_same_shape(A, B, "operator+");
  ComplexMatrix R = A;
  for (size_t k = 0; k < R.a.size(); ++k) R.a[k] += B.a[k];
  return R;
}

ComplexMatrix operator-(const ComplexMatrix& A, const ComplexMatrix& B) {
  check_same_shape(A, B, "operator-");
  ComplexMatrix R = A;
  for (size_t k = 0; k < R.a.size(); ++k) R.a[k] -= B.a[k];
  return R;
}

ComplexMatrix operator*(const ComplexMatrix& A, const ComplexMatrix& B) {
  if (A.cols != B.rows) throw ShapeError("operator*: inner dimensions differ");
  ComplexMatrix R(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const cplx aik = A.at(i, k);
      if (aik == cplx(0.0)) continue;
      for (int j = 0; j < B.cols; ++j) R.at(i, j) += aik * B.at(k, j);
    }
  return R;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& A) {
  ComplexMatrix R = A;
  for (cplx& z : R.a) z *= s;
  return R;
}

std::vector<cplx> operator*(const ComplexMatrix& A, const std::vector<cplx>& v) {
  if (A.cols != static_cast<int>(v.size()))
    throw ShapeError("matrix-vector product: size mismatch");
  std::vector<cplx> r(static_cast<size_t>(A.rows), cplx(0.0));
  for (int i = 0; i < A.rows; ++i) {
    cplx s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += A.at(i, j) * v[static_cast<size_t>(j)];
    r[static_cast<size_t>(i)] = s;
  }
  return r;
}

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
  ComplexMatrix R(A.rows * B.rows, A.cols * B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      const cplx aij = A.at(i, j);
      if (aij == cplx(0.0)) continue;
      for (int k = 0; k < B.rows; ++k)
        for (int l = 0; l < B.cols; ++l)
          R.at(i * B.rows + k, j * B.cols + l) = aij * B.at(k, l);
    }
  return R;
}

//============================================================================
// RealVector / RealMatrix
//============================================================================

double RealVector::norm2() const {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double RealVector::norm_inf() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool RealVector::all_finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

RealVector operator+(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) throw ShapeError("vector +: size mismatch");
  RealVector r = a;
  for (int i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

RealVector operator-(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) throw ShapeError("vector -: size mismatch");
  RealVector r = a;
  for (int i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

RealVector operator*(double s, const RealVector& a) {
  RealVector r = a;
  for (double& x : r.v) x *= s;
  return r;
}

double dot(const RealVector& a, const RealVector& b) {
  if (a.size() != b.size()) throw ShapeError("dot: size mismatch");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RealMatrix::RealMatrix(int r, int c, std::initializer_list<double> entries)
    : rows(r), cols(c), a(entries) {
  if (static_cast<int>(a.size()) != r * c)
    throw ShapeError("RealMatrix initializer size does not match shape");
}

RealMatrix RealMatrix::identity(int n) {
  RealMatrix I(n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1.0;
  return I;
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix R(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) R.at(j, i) = at(i, j);
  return R;
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

bool RealMatrix::all_finite() const {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

RealMatrix operator+(const RealMatrix& A, const RealMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols)
    throw ShapeError("RealMatrix +: shape mismatch");
  RealMatrix R = A;
  for (size_t k = 0; k < R.a.size(); ++k) R.a[k] += B.a[k];
  return R;
}

RealMatrix operator-(const RealMatrix& A, const RealMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols)
    throw ShapeError("RealMatrix -: shape mismatch");
  RealMatrix R = A;
  for (size_t k = 0; k < R.a.size(); ++k) R.a[k] -= B.a[k];
  return R;
}

RealMatrix operator*(const RealMatrix& A, const RealMatrix& B) {
  if (A.cols != B.rows) throw ShapeError("RealMatrix *: inner dimensions differ");
  RealMatrix R(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const double aik = A.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) R.at(i, j) += aik * B.at(k, j);
    }
  return R;
}

RealMatrix operator*(double s, const RealMatrix& A) {
  RealMatrix R = A;
  for (double& x : R.a) x *= s;
  return R;
}

RealVector operator*(const RealMatrix& A, const RealVector& x) {
  if (A.cols != x.size()) throw ShapeError("RealMatrix * vector: size mismatch");
  RealVector r(A.rows);
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += A.at(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

ComplexMatrix to_complex(const RealMatrix& A) {
  ComplexMatrix R(A.rows, A.cols);
  for (size_t k = 0; k < A.a.size(); ++k) R.a[k] = A.a[k];
  return R;
}

//============================================================================
// Hermitian eigendecomposition: cyclic Jacobi
//============================================================================

// One complex Jacobi rotation zeroing A(p,q).  The matrices here never exceed
// 16x16, so the update is done by explicit unitary conjugation; that keeps
// the code free of the classic row/column-update index bugs at negligible
// cost.
static void jacobi_rotate(ComplexMatrix& A, ComplexMatrix& V, int p, int q) {
  const cplx apq = A.at(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;

  const double app = A.at(p, p).real();
  const double aqq = A.at(q, q).real();
  const cplx phase = apq / g;

  // Rotation angle for the real symmetric 2x2 [[app, g], [g, aqq]].
  const double tau = (aqq - app) / (2.0 * g);
  double t;
  if (tau >= 0.0)
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  else
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  ComplexMatrix J = ComplexMatrix::identity(A.rows);
  J.at(p, p) = c;
  J.at(q, q) = c;
  J.at(p, q) = s * phase;
  J.at(q, p) = -s * std::conj(phase);

  A = J.adjoint() * A * J;
  V = V * J;
}

static double off_diagonal_norm(const ComplexMatrix& A) {
  double s = 0.0;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      if (i != j) s += std::norm(A.at(i, j));
  return std::sqrt(s);
}

EigenResult hermitian_eigen(const ComplexMatrix& M) {
  if (!M.is_square()) throw ShapeError("hermitian_eigen requires a square matrix");
  if (M.hermitian_defect() > 1e-10)
    throw SymmetryError("hermitian_eigen requires a Hermitian matrix");

  const int n = M.rows;
  // Work on the exactly Hermitian part so roundoff in the input cannot leak
  // imaginary components into the diagonal.
  ComplexMatrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      A.at(i, j) = 0.5 * (M.at(i, j) + std::conj(M.at(j, i)));
  ComplexMatrix V = ComplexMatrix::identity(n);

  double scale = A.max_abs();
  if (scale == 0.0) scale = 1.0;
  const double tol = 1e-15 * scale * n;

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(A) <= tol) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(A.at(p, q)) > tol / (10.0 * n)) jacobi_rotate(A, V, p, q);
  }

  // Sort eigenpairs ascending.
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return A.at(i, i).real() < A.at(j, j).real();
  });

  EigenResult res;
  res.values = RealVector(n);
  res.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    res.values[k] = A.at(order[static_cast<size_t>(k)], order[static_cast<size_t>(k)]).real();
    for (int i = 0; i < n; ++i)
      res.vectors.at(i, k) = V.at(i, order[static_cast<size_t>(k)]);
  }
  return res;
}

//============================================================================
// Singular values, norms, rank
//============================================================================

RealVector singular_values(const ComplexMatrix& M) {
  // One-sided (Hestenes) Jacobi: unitary rotations applied to column pairs
  // until all columns are mutually orthogonal, after which the column norms
  // are the singular values.  Forming M^dagger M instead would square the
  // condition number and floor the small singular values near
  // sqrt(machine eps) * sigma_max, which is far too coarse for rank
  // decisions at a 1e-10 relative threshold.
  const int m = M.rows, n = M.cols;
  RealVector sv(n);
  if (n == 0 || m == 0) return sv;
  ComplexMatrix A = M;
  if (A.max_abs() > 0.0) {
    for (int sweep = 0; sweep < 64; ++sweep) {
      bool rotated = false;
      for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q) {
          // Gram data of the column pair (the only part ever squared; it is
          // used to build an exact 2x2 rotation, not to extract values).
          double app = 0.0, aqq = 0.0;
          cplx apq(0.0, 0.0);
          for (int i = 0; i < m; ++i) {
            app += std::norm(A.at(i, p));
            aqq += std::norm(A.at(i, q));
            apq += std::conj(A.at(i, p)) * A.at(i, q);
          }
          const double g = std::abs(apq);
          // Relative orthogonality test; zero columns never rotate.
          if (g <= 1e-15 * std::sqrt(app) * std::sqrt(aqq)) continue;
          rotated = true;
          const cplx phase = apq / g;
          const double tau = (aqq - app) / (2.0 * g);
          const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          // Columns (p, q) <- (p, q) * [[c, s phase], [-s conj(phase), c]],
          // the rotation diagonalizing [[app, apq], [conj(apq), aqq]].
          for (int i = 0; i < m; ++i) {
            const cplx up = A.at(i, p), uq = A.at(i, q);
            A.at(i, p) = c * up - s * std::conj(phase) * uq;
            A.at(i, q) = s * phase * up + c * uq;
          }
        }
      if (!rotated) break;
    }
  }
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += std::norm(A.at(i, j));
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.v.begin(), sv.v.end(), [](double a, double b) { return a > b; });
  return sv;
}

RealVector singular_values(const RealMatrix& M) {
  return singular_values(to_complex(M));
}

double spectral_norm(const RealMatrix& M) {
  RealVector sv = singular_values(M);
  return sv.size() > 0 ? sv[0] : 0.0;
}

double spectral_norm(const ComplexMatrix& M) {
  RealVector sv = singular_values(M);
  return sv.size() > 0 ? sv[0] : 0.0;
}

double trace_norm(const ComplexMatrix& M) {
  if (!M.is_square()) throw ShapeError("trace_norm requires a square matrix");
  RealVector sv = singular_values(M);
  double s = 0.0;
  for (int k = 0; k < sv.size(); ++k) s += sv[k];
  return s;
}

//============================================================================
// Matrix exponential
//============================================================================

ComplexMatrix matrix_exp(const ComplexMatrix& M, double scale) {
  if (!M.is_square()) throw ShapeError("matrix_exp requires a square matrix");
  const int n = M.rows;

  ComplexMatrix A = cplx(scale) * M;
  if (A.max_abs() == 0.0) return ComplexMatrix::identity(n);

  // Scale so the series argument has infinity-norm at most 1/2, run the
  // Taylor series to machine precision, then undo by repeated squaring.
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(A.at(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const double factor = std::ldexp(1.0, -squarings);
  ComplexMatrix B = cplx(factor) * A;

  ComplexMatrix sum = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 64; ++k) {
    term = cplx(1.0 / k) * (term * B);
    sum = sum + term;
    if (term.max_abs() <= 1e-18 * sum.max_abs()) break;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;

  if (!sum.all_finite()) throw NumericalError("matrix_exp produced non-finite entries");
  return sum;
}

//============================================================================
// Linear solve and numerical rank
//============================================================================

RealVector solve_linear(const RealMatrix& A, const RealVector& b) {
  if (!A.is_square()) throw ShapeError("solve_linear requires a square matrix");
  if (A.rows != b.size()) throw ShapeError("solve_linear: right-hand side size mismatch");

  const int n = A.rows;
  RealMatrix U = A;
  RealVector y = b;

  for (int k = 0; k < n; ++k) {
    // Partial pivoting: bring the largest remaining entry of column k up.
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(U.at(i, k)) > std::abs(U.at(piv, k))) piv = i;
    if (std::abs(U.at(piv, k)) < 1e-12)
      throw SingularMatrixError("solve_linear: matrix is numerically singular", k);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(U.at(k, j), U.at(piv, j));
      std::swap(y[k], y[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = U.at(i, k) / U.at(k, k);
      if (m == 0.0) continue;
      for (int j = k; j < n; ++j) U.at(i, j) -= m * U.at(k, j);
      y[i] -= m * y[k];
    }
  }

  RealVector x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j < n; ++j) s -= U.at(i, j) * x[j];
    x[i] = s / U.at(i, i);
  }
  if (!x.all_finite()) throw NumericalError("solve_linear produced non-finite entries");
  return x;
}

int numerical_rank(const RealMatrix& M, double rel_tol) {
  if (rel_tol <= 0.0 || rel_tol >= 1.0)
    throw DomainError("numerical_rank: rel_tol must lie in (0,1)");
  RealVector sv = singular_values(M);
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  const double cut = rel_tol * sv[0];
  int r = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv[k] > cut) ++r;
  return r;
}

} // namespace qsas

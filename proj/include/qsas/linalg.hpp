// linalg.hpp -- small dense real/complex linear algebra.
//
// Everything here targets the tiny matrices this project actually meets
// (operators up to 4x4, superoperators up to 16x16, regression normal
// matrices 3x3), so the algorithms are chosen for accuracy and simplicity
// rather than speed: cyclic Jacobi for Hermitian eigenproblems, singular
// values via the eigenvalues of M^dagger M, scaling-and-squaring for the
// matrix exponential, and partial-pivot elimination for linear solves.
// All operations are pure functions of their inputs.

#ifndef QSAS_LINALG_HPP
#define QSAS_LINALG_HPP

#include <complex>
#include <initializer_list>
#include <vector>

#include "qsas/error.hpp"

namespace qsas {

using cplx = std::complex<double>;

//============================================================================
// Dense value types (row-major storage)
//============================================================================

struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> a; // row-major, a[i*cols + j]

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  ComplexMatrix(int r, int c, std::initializer_list<cplx> entries);

  static ComplexMatrix identity(int n);

  cplx& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  bool is_square() const { return rows == cols; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  cplx trace() const;

  // max_ij |a_ij|
  double max_abs() const;
  // max_ij |(M - M^dagger)_ij|; requires square
  double hermitian_defect() const;
  bool all_finite() const;
};

ComplexMatrix operator+(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix operator-(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix operator*(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix operator*(cplx s, const ComplexMatrix& A);
std::vector<cplx> operator*(const ComplexMatrix& A, const std::vector<cplx>& v);

// Kronecker product A (x) B.
ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);

struct RealVector {
  std::vector<double> v;

  RealVector() = default;
  explicit RealVector(int n) : v(static_cast<size_t>(n), 0.0) {}
  RealVector(std::initializer_list<double> entries) : v(entries) {}

  int size() const { return static_cast<int>(v.size()); }
  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  double norm2() const;
  double norm_inf() const;
  bool all_finite() const;
};

RealVector operator+(const RealVector& a, const RealVector& b);
RealVector operator-(const RealVector& a, const RealVector& b);
RealVector operator*(double s, const RealVector& a);
double dot(const RealVector& a, const RealVector& b);

struct RealMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a; // row-major

  RealMatrix() = default;
  RealMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  RealMatrix(int r, int c, std::initializer_list<double> entries);

  static RealMatrix identity(int n);

  double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const double& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  bool is_square() const { return rows == cols; }

  RealMatrix transpose() const;
  double max_abs() const;
  bool all_finite() const;
};

RealMatrix operator+(const RealMatrix& A, const RealMatrix& B);
RealMatrix operator-(const RealMatrix& A, const RealMatrix& B);
RealMatrix operator*(const RealMatrix& A, const RealMatrix& B);
RealMatrix operator*(double s, const RealMatrix& A);
RealVector operator*(const RealMatrix& A, const RealVector& x);

ComplexMatrix to_complex(const RealMatrix& A);

//============================================================================
// Factorizations and solves
//============================================================================

struct EigenResult {
  RealVector values;     // ascending
  ComplexMatrix vectors; // column k pairs with values[k]; orthonormal
};

// Hermitian eigendecomposition by cyclic Jacobi.  Throws ShapeError for a
// non-square input and SymmetryError when max|M - M^dagger| exceeds 1e-10.
EigenResult hermitian_eigen(const ComplexMatrix& M);

// Singular values, descending, via hermitian_eigen(M^dagger M).
RealVector singular_values(const ComplexMatrix& M);
RealVector singular_values(const RealMatrix& M);

// Largest singular value.
double spectral_norm(const RealMatrix& M);
double spectral_norm(const ComplexMatrix& M);

// Sum of singular values; requires square input.
double trace_norm(const ComplexMatrix& M);

// exp(M * scale) by scaling-and-squaring with a truncated Taylor core.
// exp of the zero matrix is the identity exactly.
ComplexMatrix matrix_exp(const ComplexMatrix& M, double scale = 1.0);

// Solve A x = b by partial-pivot Gaussian elimination.  A pivot whose
// magnitude falls below 1e-12 throws SingularMatrixError carrying the index
// of the failing pivot.
RealVector solve_linear(const RealMatrix& A, const RealVector& b);

// Number of singular values exceeding rel_tol times the largest one.
// The zero matrix has rank 0.
int numerical_rank(const RealMatrix& M, double rel_tol = 1e-10);

} // namespace qsas

#endif // QSAS_LINALG_HPP

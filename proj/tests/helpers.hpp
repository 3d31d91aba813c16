// helpers.hpp -- shared utilities for the test suites.

#ifndef QSAS_TESTS_HELPERS_HPP
#define QSAS_TESTS_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "qsas/linalg.hpp"
#include "qsas/rng.hpp"

namespace qt {

inline double mat_dist(const qsas::ComplexMatrix& A, const qsas::ComplexMatrix& B) {
  return (A - B).max_abs();
}

inline double mat_dist(const qsas::RealMatrix& A, const qsas::RealMatrix& B) {
  return (A - B).max_abs();
}

inline double vec_dist(const qsas::RealVector& a, const qsas::RealVector& b) {
  return (a - b).norm_inf();
}

// Random Hermitian matrix with entries of order 1.
inline qsas::ComplexMatrix random_hermitian(int d, qsas::Rng& rng) {
  qsas::ComplexMatrix G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G.at(i, j) = qsas::cplx(rng.normal(), rng.normal());
  qsas::ComplexMatrix H = qsas::cplx(0.5) * (G + G.adjoint());
  return H;
}

inline qsas::ComplexMatrix random_complex(int r, int c, qsas::Rng& rng) {
  qsas::ComplexMatrix G(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) G.at(i, j) = qsas::cplx(rng.normal(), rng.normal());
  return G;
}

inline qsas::RealMatrix random_real(int r, int c, qsas::Rng& rng) {
  qsas::RealMatrix M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M.at(i, j) = rng.uniform(-1.0, 1.0);
  return M;
}

inline qsas::RealVector random_real_vector(int n, qsas::Rng& rng) {
  qsas::RealVector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

// Rank-r product construction: rank is exactly r almost surely.
inline qsas::RealMatrix random_matrix_of_rank(int m, int n, int r, qsas::Rng& rng) {
  if (r == 0) return qsas::RealMatrix(m, n);
  qsas::RealMatrix B(m, r), C(r, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < r; ++j) B.at(i, j) = rng.normal();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) C.at(i, j) = rng.normal();
  return B * C;
}

// Independent rank oracle: Gauss-Jordan row reduction with partial pivoting,
// counting pivots above a relative threshold.
inline int row_reduction_rank(qsas::RealMatrix A, double rel_tol = 1e-8) {
  const int m = A.rows, n = A.cols;
  const double scale = A.max_abs();
  if (scale == 0.0) return 0;
  const double tol = rel_tol * scale;
  int rank = 0, row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int piv = -1;
    double best = tol;
    for (int i = row; i < m; ++i) {
      const double mag = std::abs(A.at(i, col));
      if (mag > best) {
        best = mag;
        piv = i;
      }
    }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < n; ++j) std::swap(A.at(row, j), A.at(piv, j));
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = A.at(i, col) / A.at(row, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) A.at(i, j) -= f * A.at(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

} // namespace qt

#endif // QSAS_TESTS_HELPERS_HPP

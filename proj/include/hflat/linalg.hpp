#pragma once

// Small dense complex matrices. Row-major std::vector storage throughout; the
// templates work for plain complex numbers and for jets alike.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hflat/errors.hpp"
#include "hflat/jet.hpp"

namespace hflat {

/// Inverse by Gauss-Jordan elimination with partial pivoting on the value part.
/// `zero` and `one` fix the scalar space. Throws SingularCoframeError when a pivot vanishes.
template <class S>
std::vector<S> invert(std::vector<S> a, int n, const S& zero, const S& one) {
  std::vector<S> inv(static_cast<std::size_t>(n) * n, zero);
  auto at = [n](std::vector<S>& m, int i, int j) -> S& { return m[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) at(inv, i, i) = one;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(scalar_value(at(a, col, col)));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(scalar_value(at(a, r, col)));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw SingularCoframeError("matrix is singular");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(at(a, piv, j), at(a, col, j));
        std::swap(at(inv, piv, j), at(inv, col, j));
      }
    const S pinv = one / at(a, col, col);
    for (int j = 0; j < n; ++j) {
      at(a, col, j) = at(a, col, j) * pinv;
      at(inv, col, j) = at(inv, col, j) * pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = at(a, r, col);
      for (int j = 0; j < n; ++j) {
        at(a, r, j) -= f * at(a, col, j);
        at(inv, r, j) -= f * at(inv, col, j);
      }
    }
  }
  return inv;
}

/// Upper-triangular U with positive real diagonal and A = U^* U, for a Hermitian
/// positive-definite jet matrix A. Throws SingularCoframeError if A is not positive.
std::vector<Jet> cholesky_upper(const std::vector<Jet>& a, int n);

/// Smallest eigenvalue of a Hermitian matrix (row-major, n x n).
double hermitian_min_eigenvalue(const std::vector<cplx>& a, int n);

/// Numerical rank by SVD with relative tolerance.
int matrix_rank(const std::vector<cplx>& a, int rows, int cols, double tol = 1e-10);

std::vector<cplx> values_of(const std::vector<Jet>& a);

}  // namespace hflat

#include "hflat/linalg.hpp"

#include <Eigen/Dense>

namespace hflat {

namespace {

Eigen::MatrixXcd to_eigen(const std::vector<cplx>& a, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = a[static_cast<std::size_t>(i) * cols + j];
  return m;
}

}  // namespace

std::vector<Jet> cholesky_upper(const std::vector<Jet>& a, int n) {
  const Jet zero(a[0].space());
  std::vector<Jet> u(static_cast<std::size_t>(n) * n, zero);
  auto A = [&](int i, int j) -> const Jet& { return a[static_cast<std::size_t>(i) * n + j]; };
  auto U = [&](int i, int j) -> Jet& { return u[static_cast<std::size_t>(i) * n + j]; };
  for (int k = 0; k < n; ++k) {
    Jet d = A(k, k);
    for (int j = 0; j < k; ++j) d -= conj(U(j, k)) * U(j, k);
    // The diagonal is real in exact arithmetic; drop the rounding residue of the value.
    d.coefficients()[0] = d.value().real();
    if (!(d.value().real() > 0.0)) throw SingularCoframeError("metric is not positive definite");
    U(k, k) = sqrt(d);
    const Jet inv = reciprocal(U(k, k));
    for (int l = k + 1; l < n; ++l) {
      Jet s = A(k, l);
      for (int j = 0; j < k; ++j) s -= conj(U(j, k)) * U(j, l);
      U(k, l) = s * inv;
    }
  }
  return u;
}

double hermitian_min_eigenvalue(const std::vector<cplx>& a, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(a, n, n), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

int matrix_rank(const std::vector<cplx>& a, int rows, int cols, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a, rows, cols));
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int k = 0; k < s.size(); ++k)
    if (s(k) > tol * s(0)) ++r;
  return r;
}

std::vector<cplx> values_of(const std::vector<Jet>& a) {
  std::vector<cplx> v;
  v.reserve(a.size());
  for (const auto& x : a) v.push_back(x.value());
  return v;
}

}  // namespace hflat

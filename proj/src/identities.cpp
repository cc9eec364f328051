#include "hflat/identities.hpp"

#include <cmath>

#include "hflat/errors.hpp"
#include "hflat/linalg.hpp"

namespace hflat {

namespace {

double max_abs(const JetForm& f) { return f.max_abs(); }

JetMatrix truncated(const JetMatrix& m, int order) {
  return m.map([order](const JetForm& f) { return truncate(f, order); });
}

JetForm unit_function(int n, int order) {
  JetForm f(n, 0, Jet(JetSpace::get(2 * n, order)));
  f.add(0, Jet(JetSpace::get(2 * n, order), 1.0));
  return f;
}

/// omega^k in the frame basis with jets of the given order.
JetForm kahler_power(PointGeometry& g, int k, int order) {
  JetForm w = unit_function(g.dim(), order);
  const JetForm om = g.kahler_form(order);
  for (int i = 0; i < k; ++i) w = wedge(w, om);
  return w;
}

Mask top_mask(int n) { return (Mask{1} << (2 * n)) - 1; }

/// Values of T as a dense cube for index-heavy formulas.
struct TorsionValues {
  int n;
  std::vector<cplx> v;
  explicit TorsionValues(PointGeometry& g) : n(g.dim()), v(static_cast<std::size_t>(n) * n * n) {
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v[(static_cast<std::size_t>(k) * n + i) * n + j] = g.T(k, i, j);
  }
  cplx operator()(int k, int i, int j) const { return v[(static_cast<std::size_t>(k) * n + i) * n + j]; }
};

double eta_norm2(PointGeometry& g) {
  double s = 0.0;
  for (const auto& e : g.eta_components()) s += std::norm(e.value());
  return s;
}

int swap_slot(int a, int n) { return a < n ? a + n : a - n; }

}  // namespace

double chern_structure_residual(PointGeometry& g) {
  const int n = g.dim();
  double r = 0.0;
  for (const auto& t : g.tau()) r = std::max({r, t.type_part(1, 1).max_abs(), t.type_part(0, 2).max_abs()});
  const auto& th = g.theta();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r = std::max(r, max_abs(th(i, j) + conj(th(j, i))));
  return r;
}

double chern_bianchi_torsion_residual(PointGeometry& g) {
  const int n = g.dim(), m = g.order() - 2;
  if (m < 0) throw JetError("torsion Bianchi identity needs jet order >= 2");
  const JetMatrix th = truncated(g.theta(), m);
  const auto& Th = g.chern_curvature();
  const auto& tau = g.tau();
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    JetForm s = g.d(tau[i]);
    for (int j = 0; j < n; ++j) {
      s += wedge(th(j, i), truncate(tau[j], m));
      s -= wedge(Th(j, i), g.basis_form(j, m));
    }
    r = std::max(r, s.max_abs());
  }
  return r;
}

double chern_bianchi_curvature_residual(PointGeometry& g) {
  const int m = g.order() - 3;
  if (m < 0) throw JetError("curvature Bianchi identity needs jet order >= 3");
  const JetMatrix th = truncated(g.theta(), m);
  const JetMatrix Th = truncated(g.chern_curvature(), m);
  JetMatrix s = g.chern_curvature().map([&g](const JetForm& f) { return g.d(f); });
  s -= wedge(th, Th);
  s += wedge(Th, th);
  return s.max_abs();
}

double riemannian_structure_residual(PointGeometry& g) {
  const int n = g.dim();
  double r = g.torsion_of(g.frame_connection(ConnectionKind::LeviCivita)).norm2();
  r = std::sqrt(r);
  const auto& t1 = g.theta1();
  const auto& t2 = g.theta2();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      r = std::max(r, max_abs(t1(i, j) + conj(t1(j, i))));
      r = std::max(r, max_abs(t2(i, j) + t2(j, i)));
    }
  return r;
}

double gauduchon_residual(PointGeometry& g) {
  const int n = g.dim();
  const JetForm w = kahler_power(g, n - 1, 1);
  JetForm lhs = g.d(w).type_part(n, n - 1);
  lhs += cplx(2.0) * wedge(truncate(g.eta(), 0), kahler_power(g, n - 1, 0));
  return lhs.max_abs();
}

double gray_residual(PointGeometry& g) {
  const auto& R2 = g.riem_curvature2();
  double r = 0.0;
  for (int i = 0; i < R2.rows(); ++i)
    for (int j = 0; j < R2.cols(); ++j) r = std::max(r, R2(i, j).type_part(0, 2).max_abs());
  return r;
}

double chern_curvature_type_residual(PointGeometry& g) {
  const auto& R = g.chern_curvature();
  double r = 0.0;
  for (int i = 0; i < R.rows(); ++i)
    for (int j = 0; j < R.cols(); ++j)
      r = std::max({r, R(i, j).type_part(2, 0).max_abs(), R(i, j).type_part(0, 2).max_abs()});
  return r;
}

namespace {

struct CurvatureTorsionData {
  int n;
  TorsionValues T;
  Tensor21Derivative DT;
  std::vector<cplx> R;
  const JetMatrix& chern;

  explicit CurvatureTorsionData(PointGeometry& g)
      : n(g.dim()),
        T(g),
        DT(g.torsion_derivative(ConnectionKind::Chern)),
        R(g.riemann_tensor()),
        chern(g.chern_curvature()) {}

  cplx riem(int a, int b, int c, int d) const {
    const std::size_t nb = 2 * n;
    return R[((a * nb + b) * nb + c) * nb + d];
  }
  /// R^c_{i jbar k lbar} = Theta_ij(e_k, ebar_l).
  cplx rc(int i, int j, int k, int l) const { return chern(i, j).pair_value(k, n + l); }
};

}  // namespace

double chern_curvature_torsion_dbar_residual(PointGeometry& g) {
  const CurvatureTorsionData c(g);
  const int n = c.n;
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const cplx lhs = 2.0 * c.DT(k, i, j, n + l);
          const cplx rhs = c.rc(i, k, j, l) - c.rc(j, k, i, l);
          r = std::max(r, std::abs(lhs - rhs));
        }
  return r;
}

double riem_ijk_lbar_residual(PointGeometry& g) {
  const CurvatureTorsionData c(g);
  const int n = c.n;
  const auto& T = c.T;
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx rhs = c.DT(l, i, j, k);
          for (int s = 0; s < n; ++s) rhs += T(l, s, i) * T(s, j, k) - T(l, s, j) * T(s, i, k);
          r = std::max(r, std::abs(c.riem(i, j, k, n + l) - rhs));
        }
  return r;
}

double riem_ij_kbar_lbar_residual(PointGeometry& g) {
  const CurvatureTorsionData c(g);
  const int n = c.n;
  const auto& T = c.T;
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx rhs = c.DT(l, i, j, n + k) - c.DT(k, i, j, n + l);
          for (int s = 0; s < n; ++s)
            rhs += 2.0 * T(s, i, j) * std::conj(T(s, k, l)) + T(k, s, i) * std::conj(T(j, s, l)) +
                   T(l, s, j) * std::conj(T(i, s, k)) - T(l, s, i) * std::conj(T(j, s, k)) -
                   T(k, s, j) * std::conj(T(i, s, l));
          r = std::max(r, std::abs(c.riem(i, j, n + k, n + l) - rhs));
        }
  return r;
}

double riem_i_jbar_k_lbar_residual(PointGeometry& g) {
  const CurvatureTorsionData c(g);
  const int n = c.n;
  const auto& T = c.T;
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx rhs = c.rc(i, j, k, l) - c.DT(j, i, k, n + l) - std::conj(c.DT(i, j, l, n + k));
          for (int s = 0; s < n; ++s)
            rhs += T(s, i, k) * std::conj(T(s, j, l)) - T(j, s, k) * std::conj(T(i, s, l)) -
                   T(l, s, i) * std::conj(T(k, s, j));
          r = std::max(r, std::abs(c.riem(i, n + j, k, n + l) - rhs));
        }
  return r;
}

double riem_holomorphic_vanish_residual(PointGeometry& g) {
  const int n = g.dim();
  const std::size_t nb = 2 * n;
  const auto R = g.riemann_tensor();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          r = std::max(r, std::abs(R[((i * nb + j) * nb + k) * nb + l]));
          r = std::max(r, std::abs(R[(((n + i) * nb + n + j) * nb + n + k) * nb + n + l]));
        }
  return r;
}

double chern_torsion_norm_residual(PointGeometry& g) {
  return std::abs(g.torsion_of(g.frame_connection(ConnectionKind::Chern)).norm2() - 8.0 * g.torsion_norm2());
}

double bismut_torsion_norm_residual(PointGeometry& g) {
  return std::abs(g.torsion_of(g.frame_connection(ConnectionKind::Bismut)).norm2() - 24.0 * g.torsion_norm2());
}

double surface_eta_residual(PointGeometry& g) {
  if (g.dim() != 2) throw ApplicabilityError("the surface eta relation needs dimension 2");
  const auto e = g.eta_components();
  double r = std::abs(g.torsion_norm2() - 2.0 * eta_norm2(g));
  r = std::max(r, std::abs(e[0].value() + g.T(1, 0, 1)));
  r = std::max(r, std::abs(e[1].value() - g.T(0, 0, 1)));
  return r;
}

double bismut_torsion_skew_residual(PointGeometry& g) {
  const int n = g.dim(), nb = 2 * n;
  const Tensor21 S = g.torsion_of(g.frame_connection(ConnectionKind::Bismut));
  double r = 0.0;
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b)
      for (int d = 0; d < nb; ++d)
        r = std::max(r, std::abs(S.value(swap_slot(d, n), a, b) + S.value(swap_slot(b, n), a, d)));
  return r;
}

double bismut_holomorphic_parallel_residual(PointGeometry& g) {
  const int n = g.dim();
  const auto D = g.torsion_derivative(ConnectionKind::Bismut);
  double r = 0.0;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int l = 0; l < n; ++l) r = std::max(r, std::abs(D(c, a, b, l)));
  return r;
}

double bismut_torsion_jacobi_residual(PointGeometry& g) {
  const int n = g.dim();
  const TorsionValues T(g);
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx s = 0.0;
          for (int q = 0; q < n; ++q) s += T(q, i, j) * T(l, q, k) + T(q, j, k) * T(l, q, i) + T(q, k, i) * T(l, q, j);
          r = std::max(r, std::abs(s));
        }
  return r;
}

double bismut_dbar_symmetry_residual(PointGeometry& g) {
  const int n = g.dim();
  const auto D = g.torsion_derivative(ConnectionKind::Bismut);
  double r = 0.0;
  // T^i_{kl,jbar} = -T^j_{kl,ibar} = conj(T^k_{ij,lbar})
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const cplx a = D(i, k, l, n + j);
          r = std::max(r, std::abs(a + D(j, k, l, n + i)));
          r = std::max(r, std::abs(a - std::conj(D(k, i, j, n + l))));
        }
  return r;
}

double bismut_dbar_quadratic_residual(PointGeometry& g) {
  const int n = g.dim();
  const auto D = g.torsion_derivative(ConnectionKind::Bismut);
  const TorsionValues T(g);
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx a = 0.0;
          for (int q = 0; q < n; ++q)
            a += T(i, l, q) * std::conj(T(k, j, q)) - T(i, k, q) * std::conj(T(l, j, q)) -
                 T(j, l, q) * std::conj(T(k, i, q)) + T(j, k, q) * std::conj(T(l, i, q)) -
                 T(q, k, l) * std::conj(T(q, i, j));
          r = std::max(r, std::abs(D(i, k, l, n + j) - (2.0 / 3.0) * a));
        }
  return r;
}

double bismut_eta_trace_residual(PointGeometry& g) {
  const int n = g.dim();
  const auto e = g.eta_derivative(ConnectionKind::Bismut);
  cplx tr = 0.0;
  for (int q = 0; q < n; ++q) tr += e[static_cast<std::size_t>(q) * 2 * n + n + q];
  return std::abs(tr - (2.0 / 3.0) * (g.torsion_norm2() - 2.0 * eta_norm2(g)));
}

double bismut_ddbar_omega_residual(PointGeometry& g) {
  const int n = g.dim();
  if (g.order() < 2) throw JetError("ddbar omega needs jet order >= 2");
  const JetForm w = kahler_power(g, n - 1, 2);
  const JetForm dbar_w = g.d(w).type_part(n - 1, n);
  const JetForm ddbar_w = g.d(dbar_w).type_part(n, n);
  const Mask top = top_mask(n);
  const cplx lhs = cplx(0.0, -1.0) * ddbar_w.value(top);
  const cplx vol = kahler_power(g, n, 0).value(top);
  const auto e = g.eta_derivative(ConnectionKind::Bismut);
  cplx tr = 0.0;
  for (int q = 0; q < n; ++q) tr += e[static_cast<std::size_t>(q) * 2 * n + n + q];
  const cplx rhs1 = (2.0 / n) * tr * vol;
  const cplx rhs2 = (4.0 / (3.0 * n)) * (g.torsion_norm2() - 2.0 * eta_norm2(g)) * vol;
  return std::max(std::abs(lhs - rhs1), std::abs(lhs - rhs2));
}

double agricola_friedrich_residual(PointGeometry& g) {
  const Tensor21 S = g.torsion_of(g.frame_connection(ConnectionKind::Bismut));
  return g.covariant_derivative(S, g.frame_connection(ConnectionKind::AgricolaFriedrich)).max_abs();
}

double chern_curvature_norm(PointGeometry& g) { return g.chern_curvature().max_abs(); }

double riemannian_curvature_norm(PointGeometry& g) {
  return std::max(g.riem_curvature1().max_abs(), g.riem_curvature2().max_abs());
}

double bismut_curvature_norm(PointGeometry& g) { return g.bismut_curvature().max_abs(); }

double balanced_kahler_residual(PointGeometry& g) {
  if (std::sqrt(eta_norm2(g)) >= 1e-10) return 0.0;
  return std::sqrt(g.torsion_norm2());
}

double reference_torsion_residual(const HermitianModel& m, const ChartPoint& p, PointGeometry& g) {
  const int n = g.dim();
  double r = 0.0;
  if (m.reference_torsion) {
    const auto ref = m.reference_torsion(p);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          r = std::max(r, std::abs(g.T(k, i, j) - ref[(static_cast<std::size_t>(k) * n + i) * n + j]));
  }
  if (m.reference_chern_torsion_norm) {
    const double tc = g.torsion_of(g.frame_connection(ConnectionKind::Chern)).norm2();
    r = std::max(r, std::abs(tc - m.reference_chern_torsion_norm(p)));
  }
  return r;
}

double reference_riemannian_residual(const HermitianModel& m, const ChartPoint& p, PointGeometry& g) {
  if (!m.reference_riemannian || g.dim() != 2) throw ApplicabilityError("model has no Riemannian reference data");
  const auto ref = m.reference_riemannian(p);
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      FormValue a = form_value(g.to_coordinate_basis(g.theta1()(i, j)));
      FormValue b = form_value(g.to_coordinate_basis(g.theta2()(i, j)));
      if (i == j) a -= ref.alpha;
      if (i == 0 && j == 1) b -= ref.beta;
      if (i == 1 && j == 0) b += ref.beta;
      r = std::max({r, a.max_abs(), b.max_abs()});
    }
  return r;
}

std::vector<cplx> psh_exact_side(PointGeometry& g) {
  const int n = g.dim();
  const auto D = g.torsion_derivative(ConnectionKind::Bismut);
  std::vector<cplx> K(static_cast<std::size_t>(n) * n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) {
      cplx s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) s += D(i, j, k, n + l) * std::conj(D(i, j, k, n + m));
      K[static_cast<std::size_t>(m) * n + l] = s;
    }
  return K;
}

std::vector<cplx> psh_difference_side(const HermitianModel& m, const ChartPoint& p, PointGeometry& g, double h) {
  if (!m.holomorphic_chart) throw ApplicabilityError("finite-difference complex Hessian needs a holomorphic chart");
  const int n = g.dim(), nr = 2 * n;
  auto f = [&](const std::vector<double>& shift) {
    ChartPoint q = p;
    for (int a = 0; a < n; ++a) q.coords[a] += cplx(shift[2 * a], shift[2 * a + 1]);
    return PointGeometry(m.coframe, q, 1).torsion_norm2();
  };
  const double f0 = f(std::vector<double>(nr, 0.0));
  auto hessian = [&](double step) {
    std::vector<double> H(static_cast<std::size_t>(nr) * nr, 0.0);
    std::vector<double> s(nr, 0.0);
    for (int u = 0; u < nr; ++u) {
      s.assign(nr, 0.0);
      s[u] = step;
      const double fp = f(s);
      s[u] = -step;
      const double fm = f(s);
      H[u * nr + u] = (fp - 2.0 * f0 + fm) / (step * step);
      for (int v = u + 1; v < nr; ++v) {
        double acc = 0.0;
        for (int su : {1, -1})
          for (int sv : {1, -1}) {
            s.assign(nr, 0.0);
            s[u] = su * step;
            s[v] = sv * step;
            acc += su * sv * f(s);
          }
        H[u * nr + v] = H[v * nr + u] = acc / (4.0 * step * step);
      }
    }
    return H;
  };
  const auto Hh = hessian(h), Hh2 = hessian(h / 2.0);
  std::vector<double> H(Hh.size());
  for (std::size_t k = 0; k < H.size(); ++k) H[k] = (4.0 * Hh2[k] - Hh[k]) / 3.0;
  auto R = [&](int u, int v) { return H[u * nr + v]; };
  // Complex Hessian d^2 f / dz_a dzbar_b.
  std::vector<cplx> C(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      C[a * n + b] = 0.25 * cplx(R(2 * a, 2 * b) + R(2 * a + 1, 2 * b + 1), R(2 * a, 2 * b + 1) - R(2 * a + 1, 2 * b));
  const auto& Mi = g.inverse_frame_matrix();
  auto minv = [&](int w, int c) { return Mi[static_cast<std::size_t>(w) * nr + c].value(); };
  std::vector<cplx> K(static_cast<std::size_t>(n) * n, 0.0);
  for (int mm = 0; mm < n; ++mm)
    for (int l = 0; l < n; ++l) {
      cplx s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += C[a * n + b] * minv(a, mm) * minv(n + b, n + l);
      K[static_cast<std::size_t>(mm) * n + l] = s;
    }
  return K;
}

double psh_residual(const HermitianModel& m, const ChartPoint& p, PointGeometry& g) {
  const auto a = psh_exact_side(g), b = psh_difference_side(m, p, g);
  double r = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) r = std::max(r, std::abs(a[k] - b[k]));
  return r;
}

double psh_min_eigenvalue(const HermitianModel& m, const ChartPoint& p, PointGeometry& g) {
  return hermitian_min_eigenvalue(psh_difference_side(m, p, g), g.dim());
}

}  // namespace hflat

#include "hflat/geometry.hpp"

#include <cmath>
#include <string>

#include "hflat/errors.hpp"
#include "hflat/linalg.hpp"

namespace hflat {

namespace {

Jet jet_zero(int nvars, int order) { return Jet(JetSpace::get(nvars, order)); }

JetForm zero_form(int n, int degree, int order) { return JetForm(n, degree, jet_zero(2 * n, order)); }

JetMatrix truncate(const JetMatrix& m, int order) {
  return m.map([order](const JetForm& f) { return hflat::truncate(f, order); });
}

}  // namespace

double Tensor21::norm2() const {
  double s = 0.0;
  for (const auto& x : data) s += std::norm(x.value());
  return s;
}

double Tensor21Derivative::max_abs() const {
  double r = 0.0;
  for (const auto& x : data) r = std::max(r, std::abs(x));
  return r;
}

PointGeometry::PointGeometry(const CoframeField& field, const ChartPoint& point, int order)
    : n_(field.dim), K_(order), point_(point) {
  point_.validate();
  if (point_.dim() != n_)
    throw DomainError("point has dimension " + std::to_string(point_.dim()) + ", model has " + std::to_string(n_));
  if (order < 1 || order > kMaxJetOrder) throw JetError("geometry needs jet order in 1.." + std::to_string(kMaxJetOrder));
  const int nb = 2 * n_;

  const auto z = lift_point(point_, K_);
  C_ = field.coefficients(z);
  if (static_cast<int>(C_.size()) != n_ * nb) throw std::logic_error("coframe returned the wrong number of entries");

  M_.assign(static_cast<std::size_t>(nb) * nb, jet_zero(nb, K_));
  for (int a = 0; a < n_; ++a)
    for (int w = 0; w < nb; ++w) {
      const Jet& c = C_[static_cast<std::size_t>(a) * nb + w];
      M_[static_cast<std::size_t>(a) * nb + w] = c;
      const int ws = w < n_ ? w + n_ : w - n_;
      M_[static_cast<std::size_t>(n_ + a) * nb + ws] = conj(c);
    }

  {
    const auto m = values_of(M_);
    std::vector<cplx> mm(static_cast<std::size_t>(nb) * nb, 0.0);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        for (int k = 0; k < nb; ++k)
          mm[static_cast<std::size_t>(i) * nb + j] += std::conj(m[static_cast<std::size_t>(k) * nb + i]) * m[static_cast<std::size_t>(k) * nb + j];
    const double lo = hermitian_min_eigenvalue(mm, nb);
    if (!(lo > kPositivityTolerance))
      throw SingularCoframeError("coframe is degenerate (min eigenvalue " + std::to_string(lo) + ")");
  }
  Jet one = jet_zero(nb, K_);
  one += cplx(1.0);
  Minv_ = invert(M_, nb, jet_zero(nb, K_), one);

  dphi_.reserve(n_);
  double bad = 0.0;
  for (int i = 0; i < n_; ++i) {
    dphi_.push_back(d(basis_form(i, K_)));
    bad = std::max(bad, dphi_.back().type_part(0, 2).max_abs());
  }
  if (bad > kIntegrabilityTolerance) throw IntegrabilityError("coframe is not integrable: d phi has a (0,2) part", bad);
}

std::vector<cplx> PointGeometry::metric_matrix() const {
  const int nb = 2 * n_;
  std::vector<cplx> g(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        g[static_cast<std::size_t>(i) * n_ + j] +=
            C_[static_cast<std::size_t>(k) * nb + i].value() * std::conj(C_[static_cast<std::size_t>(k) * nb + j].value());
  return g;
}

JetForm PointGeometry::basis_form(int slot, int order) const {
  JetForm f = zero_form(n_, 1, order);
  Jet one = jet_zero(2 * n_, order);
  one += cplx(1.0);
  f.add(Mask{1} << slot, one);
  return f;
}

JetForm PointGeometry::kahler_form(int order) const {
  JetForm w = zero_form(n_, 2, order);
  Jet i_unit = jet_zero(2 * n_, order);
  i_unit += cplx(0.0, 1.0);
  for (int k = 0; k < n_; ++k) w.add_monomial({k, n_ + k}, i_unit);
  return w;
}

BasisChange<Jet>& PointGeometry::to_coord(int order) {
  auto it = to_coord_.find(order);
  if (it != to_coord_.end()) return it->second;
  std::vector<Jet> rows;
  rows.reserve(M_.size());
  for (const auto& x : M_) rows.push_back(x.truncate(order));
  return to_coord_.emplace(order, BasisChange<Jet>(n_, std::move(rows), jet_zero(2 * n_, order))).first->second;
}

BasisChange<Jet>& PointGeometry::to_frame(int order) {
  auto it = to_frame_.find(order);
  if (it != to_frame_.end()) return it->second;
  std::vector<Jet> rows;
  rows.reserve(Minv_.size());
  for (const auto& x : Minv_) rows.push_back(x.truncate(order));
  return to_frame_.emplace(order, BasisChange<Jet>(n_, std::move(rows), jet_zero(2 * n_, order))).first->second;
}

JetForm PointGeometry::d(const JetForm& f) {
  const int m = f.zero().order();
  if (m < 1) throw JetError("exterior derivative needs jets of order >= 1");
  return to_frame(m - 1).apply(exterior_d(to_coord(m).apply(f)));
}

JetForm PointGeometry::to_frame_basis(const JetForm& coordinate_form) {
  return to_frame(coordinate_form.zero().order()).apply(coordinate_form);
}

JetForm PointGeometry::to_coordinate_basis(const JetForm& frame_form) {
  return to_coord(frame_form.zero().order()).apply(frame_form);
}

Jet PointGeometry::frame_derivative(const Jet& f, int l) const {
  const int m = f.order() - 1;
  Jet out = jet_zero(2 * n_, m);
  for (int w = 0; w < 2 * n_; ++w)
    out.add_product(f.derivative(w), Minv_[static_cast<std::size_t>(w) * 2 * n_ + l].truncate(m));
  return out;
}

const JetMatrix& PointGeometry::theta() {
  if (theta_) return *theta_;
  const int m = K_ - 1;
  JetMatrix th(n_, n_, zero_form(n_, 1, m));
  // P^i_jk: coefficient of psi_j ^ psibar_k in d phi_i.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        const Jet p = dphi_[i].coeff((Mask{1} << j) | (Mask{1} << (n_ + k)));
        if (p.is_zero()) continue;
        th(j, i).add(Mask{1} << (n_ + k), p);
        th(i, j).add(Mask{1} << k, -conj(p));
      }
  theta_ = std::move(th);
  return *theta_;
}

const std::vector<JetForm>& PointGeometry::tau() {
  if (tau_) return *tau_;
  const auto& th = theta();
  std::vector<JetForm> t;
  for (int i = 0; i < n_; ++i) {
    JetForm ti = dphi_[i];
    for (int j = 0; j < n_; ++j) ti += wedge(th(j, i), basis_form(j, K_ - 1));
    t.push_back(std::move(ti));
  }
  tau_ = std::move(t);
  return *tau_;
}

const Tensor21& PointGeometry::torsion() {
  if (T_) return *T_;
  const auto& t = tau();
  const Jet zero = jet_zero(2 * n_, K_ - 1);
  Tensor21 T{n_, std::vector<Jet>(static_cast<std::size_t>(n_) * n_ * n_, zero)};
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        const Jet c = t[k].coeff((Mask{1} << i) | (Mask{1} << j)) * 0.5;
        T(k, j, i) = -c;
        T(k, i, j) = c;
      }
  T_ = std::move(T);
  return *T_;
}

double PointGeometry::torsion_norm2() { return torsion().norm2(); }

const JetMatrix& PointGeometry::gamma() {
  if (gamma_) return *gamma_;
  const auto& T = torsion();
  JetMatrix g(n_, n_, zero_form(n_, 1, K_ - 1));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        if (!T(j, i, k).is_zero()) g(i, j).add(Mask{1} << k, T(j, i, k));
        if (!T(i, j, k).is_zero()) g(i, j).add(Mask{1} << (n_ + k), -conj(T(i, j, k)));
      }
  gamma_ = std::move(g);
  return *gamma_;
}

const JetMatrix& PointGeometry::theta1() {
  if (!theta1_) theta1_ = theta() + gamma();
  return *theta1_;
}

const JetMatrix& PointGeometry::thetaB() {
  if (!thetaB_) thetaB_ = theta() + cplx(2.0) * gamma();
  return *thetaB_;
}

const JetMatrix& PointGeometry::theta2() {
  if (theta2_) return *theta2_;
  const auto& T = torsion();
  JetMatrix t2(n_, n_, zero_form(n_, 1, K_ - 1));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (!T(k, i, j).is_zero()) t2(i, j).add(Mask{1} << k, conj(T(k, i, j)));
  theta2_ = std::move(t2);
  return *theta2_;
}

std::vector<Jet> PointGeometry::eta_components() {
  const auto& T = torsion();
  std::vector<Jet> e(n_, jet_zero(2 * n_, K_ - 1));
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) e[j] += T(i, i, j);
  return e;
}

const JetForm& PointGeometry::eta() {
  if (eta_) return *eta_;
  JetForm e = zero_form(n_, 1, K_ - 1);
  const auto c = eta_components();
  for (int j = 0; j < n_; ++j)
    if (!c[j].is_zero()) e.add(Mask{1} << j, c[j]);
  eta_ = std::move(e);
  return *eta_;
}

JetMatrix PointGeometry::curvature_from(const JetMatrix& conn) {
  if (K_ < 2) throw JetError("curvature needs jet order >= 2");
  const JetMatrix t = truncate(conn, K_ - 2);
  return conn.map([this](const JetForm& f) { return d(f); }) - wedge(t, t);
}

const JetMatrix& PointGeometry::chern_curvature() {
  if (!curv_chern_) curv_chern_ = curvature_from(theta());
  return *curv_chern_;
}

const JetMatrix& PointGeometry::bismut_curvature() {
  if (!curv_b_) curv_b_ = curvature_from(thetaB());
  return *curv_b_;
}

const JetMatrix& PointGeometry::riem_curvature1() {
  if (curv_r1_) return *curv_r1_;
  const JetMatrix t2 = truncate(theta2(), K_ - 2);
  curv_r1_ = curvature_from(theta1()) - wedge(conj(t2), t2);
  return *curv_r1_;
}

const JetMatrix& PointGeometry::riem_curvature2() {
  if (curv_r2_) return *curv_r2_;
  if (K_ < 2) throw JetError("curvature needs jet order >= 2");
  const JetMatrix t1 = truncate(theta1(), K_ - 2);
  const JetMatrix t2 = truncate(theta2(), K_ - 2);
  curv_r2_ = theta2().map([this](const JetForm& f) { return d(f); }) - wedge(t2, t1) - wedge(conj(t1), t2);
  return *curv_r2_;
}

JetMatrix PointGeometry::frame_connection(ConnectionKind kind) {
  const int nb = 2 * n_;
  JetMatrix out(nb, nb, zero_form(n_, 1, K_ - 1));
  auto place = [&](const JetMatrix& a, int r0, int c0) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out(r0 + i, c0 + j) += a(i, j);
  };
  switch (kind) {
    case ConnectionKind::Chern:
      place(theta(), 0, 0);
      place(conj(theta()), n_, n_);
      break;
    case ConnectionKind::Bismut:
      place(thetaB(), 0, 0);
      place(conj(thetaB()), n_, n_);
      break;
    case ConnectionKind::LeviCivita:
      place(theta1(), 0, 0);
      place(conj(theta2()), 0, n_);
      place(theta2(), n_, 0);
      place(conj(theta1()), n_, n_);
      break;
    case ConnectionKind::AgricolaFriedrich:
      out = cplx(2.0 / 3.0) * frame_connection(ConnectionKind::LeviCivita) +
            cplx(1.0 / 3.0) * frame_connection(ConnectionKind::Bismut);
      break;
  }
  return out;
}

Tensor21 PointGeometry::torsion_of(const JetMatrix& omega) {
  const int nb = 2 * n_;
  const int m = K_ - 1;
  Tensor21 S{nb, std::vector<Jet>(static_cast<std::size_t>(nb) * nb * nb, jet_zero(nb, m))};
  for (int c = 0; c < nb; ++c) {
    JetForm t = c < n_ ? dphi_[c] : conj(dphi_[c - n_]);
    for (int a = 0; a < nb; ++a) t += wedge(omega(a, c), basis_form(a, m));
    for (const auto& [mask, coeff] : t.terms()) {
      const int a = std::countr_zero(mask);
      const int b = std::countr_zero(mask & (mask - 1));
      S(c, a, b) += coeff;
      S(c, b, a) -= coeff;
    }
  }
  return S;
}

Tensor21Derivative PointGeometry::derivative_impl(const Tensor21& s, const JetMatrix& omega, int N) {
  const int nb = 2 * n_;
  if (K_ < 2) throw JetError("covariant derivative needs jet order >= 2");
  Tensor21Derivative out{N, nb, std::vector<cplx>(static_cast<std::size_t>(N) * N * N * nb, 0.0)};
  // Connection coefficients Gamma_ar(l) as values.
  std::vector<cplx> G(static_cast<std::size_t>(N) * N * nb, 0.0);
  for (int a = 0; a < N; ++a)
    for (int r = 0; r < N; ++r)
      for (const auto& [mask, c] : omega(a, r).terms())
        G[(static_cast<std::size_t>(a) * N + r) * nb + std::countr_zero(mask)] = c.value();
  auto g = [&](int a, int r, int l) { return G[(static_cast<std::size_t>(a) * N + r) * nb + l]; };
  auto at = [&](int c, int a, int b, int l) -> cplx& {
    return out.data[((static_cast<std::size_t>(c) * N + a) * N + b) * nb + l];
  };
  for (int c = 0; c < N; ++c)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        const Jet& x = s(c, a, b);
        for (int l = 0; l < nb; ++l) {
          cplx v = x.is_zero() ? cplx(0.0) : frame_derivative(x, l).value();
          for (int r = 0; r < N; ++r)
            v += -g(a, r, l) * s.value(c, r, b) - g(b, r, l) * s.value(c, a, r) + s.value(r, a, b) * g(r, c, l);
          at(c, a, b, l) = v;
        }
      }
  return out;
}

Tensor21Derivative PointGeometry::torsion_derivative(ConnectionKind kind) {
  if (kind == ConnectionKind::Chern) return derivative_impl(torsion(), theta(), n_);
  if (kind == ConnectionKind::Bismut) return derivative_impl(torsion(), thetaB(), n_);
  throw std::invalid_argument("torsion_derivative supports the Chern and Bismut connections");
}

Tensor21Derivative PointGeometry::covariant_derivative(const Tensor21& s, const JetMatrix& omega) {
  return derivative_impl(s, omega, s.N);
}

std::vector<cplx> PointGeometry::eta_derivative(ConnectionKind kind) {
  if (K_ < 2) throw JetError("covariant derivative needs jet order >= 2");
  const JetMatrix* conn = nullptr;
  if (kind == ConnectionKind::Chern) conn = &theta();
  else if (kind == ConnectionKind::Bismut) conn = &thetaB();
  else throw std::invalid_argument("eta_derivative supports the Chern and Bismut connections");
  const int nb = 2 * n_;
  const auto e = eta_components();
  std::vector<cplx> out(static_cast<std::size_t>(n_) * nb, 0.0);
  for (int a = 0; a < n_; ++a)
    for (int l = 0; l < nb; ++l) {
      cplx v = e[a].is_zero() ? cplx(0.0) : frame_derivative(e[a], l).value();
      for (int r = 0; r < n_; ++r) v -= (*conn)(a, r).value(Mask{1} << l) * e[r].value();
      out[static_cast<std::size_t>(a) * nb + l] = v;
    }
  return out;
}

std::vector<cplx> PointGeometry::riemann_tensor() {
  const int nb = 2 * n_;
  const auto& R1 = riem_curvature1();
  const auto& R2 = riem_curvature2();
  const JetMatrix R1b = conj(R1), R2b = conj(R2);
  // Curvature of the 2n-frame connection: [[Theta1, conj Theta2], [Theta2, conj Theta1]].
  auto block = [&](int a, int e) -> const JetForm& {
    if (a < n_ && e < n_) return R1(a, e);
    if (a < n_) return R2b(a, e - n_);
    if (e < n_) return R2(a - n_, e);
    return R1b(a - n_, e - n_);
  };
  std::vector<cplx> R(static_cast<std::size_t>(nb) * nb * nb * nb, 0.0);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      const int e = b < n_ ? b + n_ : b - n_;  // g_{e b} = 1 only for this e
      const JetForm& f = block(a, e);
      for (int c = 0; c < nb; ++c)
        for (int dd = 0; dd < nb; ++dd)
          R[((static_cast<std::size_t>(a) * nb + b) * nb + c) * nb + dd] = f.pair_value(c, dd);
    }
  return R;
}

}  // namespace hflat

#pragma once

// Connections, torsion and curvature of a Hermitian metric given by a unitary
// coframe phi_1..phi_n, evaluated at one chart point.
//
// All forms are expressed in the coframe basis psi = (phi_1..phi_n,
// phibar_1..phibar_n). Derivatives come from running the construction on
// jets: with coframe coefficients of order K, connection forms carry order
// K-1, curvature and covariant derivatives K-2, and d of curvature K-3.
//
// Conventions: grad e_i = sum_j theta_ij e_j, d phi = -theta^t ^ phi + tau,
// tau_k = sum_{i,j} T^k_ij phi_i ^ phi_j (so T carries a factor 1/2 relative
// to the full torsion tensor). The real metric is extended complex-bilinearly
// with g(e_i, ebar_j) = delta_ij.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hflat/forms.hpp"
#include "hflat/jet.hpp"

namespace hflat {

/// Coefficients of phi_i = sum_w C(i, w) dw_w, w running over (dz_1..dz_n, dzbar_1..dzbar_n).
/// Given jets of z_1..z_n, returns the n x 2n matrix row-major with jets of the same order.
using CoframeFn = std::function<std::vector<Jet>(std::span<const Jet> z)>;

struct CoframeField {
  int dim = 0;
  CoframeFn coefficients;
};

using JetMatrix = MatrixOfForms<Jet>;

enum class ConnectionKind { Chern, Bismut, LeviCivita, AgricolaFriedrich };

/// (2,1) tensor over an N-element frame: entry (c, a, b) is S^c_ab = component c of S(E_a, E_b).
struct Tensor21 {
  int N = 0;
  std::vector<Jet> data;

  const Jet& operator()(int c, int a, int b) const { return data[(static_cast<std::size_t>(c) * N + a) * N + b]; }
  Jet& operator()(int c, int a, int b) { return data[(static_cast<std::size_t>(c) * N + a) * N + b]; }
  cplx value(int c, int a, int b) const { return (*this)(c, a, b).value(); }
  double norm2() const;
};

/// Covariant derivative of a (2,1) tensor: entry ((c, a, b), l) is S^c_{ab,l} along E_l, l < 2n.
struct Tensor21Derivative {
  int N = 0;
  int nb = 0;
  std::vector<cplx> data;

  cplx operator()(int c, int a, int b, int l) const {
    return data[((static_cast<std::size_t>(c) * N + a) * N + b) * nb + l];
  }
  double max_abs() const;
};

class PointGeometry {
 public:
  /// Throws SingularCoframeError when the coframe does not span the (1,0) covectors
  /// (smallest eigenvalue of M^*M at most 1e-10) and IntegrabilityError when d phi has
  /// a (0,2) part.
  PointGeometry(const CoframeField& field, const ChartPoint& point, int order);

  int dim() const { return n_; }
  int order() const { return K_; }
  const ChartPoint& point() const { return point_; }

  /// n x 2n coframe coefficients, order K.
  const std::vector<Jet>& coefficients() const { return C_; }
  /// Rows psi_a in terms of dw, and its inverse (dw_w in terms of psi). Order K.
  const std::vector<Jet>& frame_matrix() const { return M_; }
  const std::vector<Jet>& inverse_frame_matrix() const { return Minv_; }
  /// Hermitian metric g_{i jbar} in chart coordinates (values), for holomorphic coframes.
  std::vector<cplx> metric_matrix() const;

  // Frame calculus.
  JetForm basis_form(int slot, int order) const;
  JetForm kahler_form(int order) const;
  JetForm d(const JetForm& f);
  JetForm to_frame_basis(const JetForm& coordinate_form);
  JetForm to_coordinate_basis(const JetForm& frame_form);
  /// E_l f for a jet-valued function, one order lower.
  Jet frame_derivative(const Jet& f, int l) const;

  // Chern connection and derived quantities (order K-1).
  const std::vector<JetForm>& dphi() const { return dphi_; }
  const JetMatrix& theta();
  const std::vector<JetForm>& tau();
  /// T^k_ij with antisymmetry exact by construction.
  const Tensor21& torsion();
  cplx T(int k, int i, int j) { return torsion().value(k, i, j); }
  double torsion_norm2();
  const JetMatrix& gamma();
  const JetMatrix& theta1();
  const JetMatrix& theta2();
  const JetMatrix& thetaB();
  const JetForm& eta();
  /// eta_j = sum_i T^i_ij.
  std::vector<Jet> eta_components();

  // Curvature (order K-2).
  const JetMatrix& chern_curvature();
  const JetMatrix& riem_curvature1();
  const JetMatrix& riem_curvature2();
  const JetMatrix& bismut_curvature();

  /// 2n x 2n connection matrix over (e, ebar).
  JetMatrix frame_connection(ConnectionKind kind);
  /// Torsion S^c_ab = Tors_c(E_a, E_b) of a 2n-frame connection, order K-1.
  Tensor21 torsion_of(const JetMatrix& omega);
  /// Covariant derivative of the Chern torsion T^k_ij with the Chern or Bismut connection.
  Tensor21Derivative torsion_derivative(ConnectionKind kind);
  /// Covariant derivative of a 2n-frame (2,1) tensor with a 2n-frame connection.
  Tensor21Derivative covariant_derivative(const Tensor21& s, const JetMatrix& omega);
  /// eta_{a,l} with the Chern or Bismut connection, row-major n x 2n.
  std::vector<cplx> eta_derivative(ConnectionKind kind);

  /// Riemannian curvature R_abcd over (e, ebar), row-major (2n)^4, from Theta1 and Theta2.
  std::vector<cplx> riemann_tensor();

 private:
  BasisChange<Jet>& to_coord(int order);
  BasisChange<Jet>& to_frame(int order);
  JetMatrix curvature_from(const JetMatrix& conn);
  Tensor21Derivative derivative_impl(const Tensor21& s, const JetMatrix& omega, int N);

  int n_;
  int K_;
  ChartPoint point_;
  std::vector<Jet> C_, M_, Minv_;
  std::vector<JetForm> dphi_;
  std::map<int, BasisChange<Jet>> to_coord_, to_frame_;

  std::optional<JetMatrix> theta_, gamma_, theta1_, theta2_, thetaB_;
  std::optional<std::vector<JetForm>> tau_;
  std::optional<Tensor21> T_;
  std::optional<JetForm> eta_;
  std::optional<JetMatrix> curv_chern_, curv_r1_, curv_r2_, curv_b_;
};

/// Integrability threshold on the (0,2) part of d phi.
inline constexpr double kIntegrabilityTolerance = 1e-8;
/// Smallest admissible eigenvalue of M^*M.
inline constexpr double kPositivityTolerance = 1e-10;

}  // namespace hflat

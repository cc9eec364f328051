#pragma once

// Real Lie algebras with inner products, orthogonal complex structures built from
// root data, an algebraic Bismut-flatness check, and the exponential-chart coframe
// that exports a left-invariant Hermitian structure to the chart engine.
//
// Root normalization: a root alpha satisfies [H, E] = i alpha(H) E for torus elements H
// (no 2 pi factor).

#include <optional>
#include <string>
#include <vector>

#include "hflat/catalog.hpp"
#include "hflat/jet.hpp"

namespace hflat {

struct RootDatum {
  /// Orthonormal torus basis, each a real vector in the algebra basis.
  std::vector<std::vector<double>> torus;
  /// roots[j][s] = alpha_j(torus[s]) for the positive roots.
  std::vector<std::vector<double>> roots;
  /// Root vectors E_j in the complexification, one per positive root.
  std::vector<std::vector<cplx>> root_vectors;
};

struct LieAlgebra {
  std::string name;
  int dim = 0;
  std::vector<std::string> labels;
  /// [X_i, X_j] = sum_k c[(k * dim + i) * dim + j] X_k.
  std::vector<double> c;
  /// Inner product, row-major dim x dim.
  std::vector<double> g;
  bool bi_invariant = false;
  std::optional<RootDatum> root_datum;

  double constant(int k, int i, int j) const { return c[(static_cast<std::size_t>(k) * dim + i) * dim + j]; }
  int index_of(const std::string& label) const;
  std::vector<cplx> bracket(const std::vector<cplx>& x, const std::vector<cplx>& y) const;
  cplx inner(const std::vector<cplx>& x, const std::vector<cplx>& y) const;
};

/// Real linear map with J(X_i) = sum_k J[k * dim + i] X_k.
struct ComplexStructure {
  int dim = 0;
  std::vector<double> J;

  double operator()(int k, int i) const { return J[static_cast<std::size_t>(k) * dim + i]; }
  std::vector<cplx> apply(const std::vector<cplx>& v) const;
};

double antisymmetry_residual(const LieAlgebra& a);
double jacobi_residual(const LieAlgebra& a);
/// max |<[X,Y],Z> + <[X,Z],Y>| over basis triples.
double ad_skew_residual(const LieAlgebra& a);
/// max |[H, E_j] - i alpha_j(H) E_j| over torus elements and root vectors.
double root_space_residual(const LieAlgebra& a, const RootDatum& d);

double square_residual(const ComplexStructure& J);
double orthogonality_residual(const LieAlgebra& a, const ComplexStructure& J);
/// max |J([X,Y] - [JX,JY]) - [JX,Y] - [X,JY]| over basis pairs.
double integrability_residual(const LieAlgebra& a, const ComplexStructure& J);

/// J whose +i eigenspace is a + sum of the selected root spaces. `torus_j` acts on the
/// torus basis (same column convention as ComplexStructure); `signs[j]` = +1 picks alpha_j,
/// -1 picks -alpha_j. Throws std::invalid_argument when the choice is not closed under
/// root addition, naming the offending pair.
ComplexStructure samelson_structure(const LieAlgebra& a, const RootDatum& d, const std::vector<double>& torus_j,
                                    const std::vector<int>& signs);

struct SamelsonConditions {
  /// max |<s, s'>| over the +i eigenspace s.
  double isotropy = 0.0;
  /// rank of [s | conj s]; equals dim exactly when s meets g trivially and s + conj s = g^c.
  int span_rank = 0;
  int dim = 0;
  /// max distance of [s, s'] from s.
  double closure = 0.0;
};
SamelsonConditions samelson_conditions(const LieAlgebra& a, const ComplexStructure& J);

/// Unitary (1,0) frame e_k = (u_k - i J u_k) / sqrt(2) for a J-adapted orthonormal basis.
std::vector<std::vector<cplx>> unitary_frame(const LieAlgebra& a, const ComplexStructure& J);

struct AlgebraicBismutReport {
  double integrability = 0.0;
  double ad_skew = 0.0;
  /// max |T^k_ij - C^k_ij / 2| with [e_i, e_j] = sum C^k_ij e_k.
  double torsion_vs_structure = 0.0;
  /// Largest Bismut connection coefficient in the left-invariant unitary frame.
  double bismut_coefficients = 0.0;
  /// Jacobi-type torsion identity sum_r (T^r_ij T^l_rk + cyclic).
  double torsion_jacobi = 0.0;
  /// Quadratic expression that equals T^i_{kl,jbar} on Bismut-flat manifolds; zero for constant torsion.
  double dbar_quadratic = 0.0;
  double torsion_norm2 = 0.0;
  bool kahler = false;
};
/// Throws ApplicabilityError for a non-bi-invariant metric or a non-integrable J.
AlgebraicBismutReport algebraic_bismut_check(const LieAlgebra& a, const ComplexStructure& J);

/// ||ad_x||_F^(K+1) / (K+2)!, bounding the truncated Maurer-Cartan series remainder.
double truncation_bound(const LieAlgebra& a, const std::vector<double>& x, int K);

/// Left-invariant coframe in exponential coordinates x (z_i = x_i + i x_{n+i}), with the
/// Maurer-Cartan series truncated after K terms. Points with |x| > radius or with truncation
/// bound above `tolerance` are outside the domain.
HermitianModel lie_group_model(const LieAlgebra& a, const ComplexStructure& J, std::string structure_name,
                               int K = 20, double radius = 0.5, double tolerance = 1e-6);

/// abelian-2, abelian-4, abelian-6 (alias abelian), su2, su2+r, su2+r3, su2+su2, su2+su2+r2.
LieAlgebra lie_algebra(const std::string& name);
/// standard, central-ce, reversed, mixed:a=..,b=.., nonintegrable; availability depends on the algebra.
ComplexStructure named_structure(const LieAlgebra& a, const std::string& ref);
std::vector<std::pair<std::string, std::string>> lie_listing();

/// Data kept on a catalog model built from a Lie algebra.
struct LieHermitianStructure {
  LieAlgebra algebra;
  ComplexStructure J;
  std::string structure_name;
  int truncation = 20;
};

}  // namespace hflat

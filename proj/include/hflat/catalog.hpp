#pragma once

// Built-in Hermitian models. Each model carries its coframe field, a domain
// predicate, a sampler for its default sampling region, flatness claims to be
// verified, and closed-form reference values where they are known.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hflat/expr.hpp"
#include "hflat/forms.hpp"
#include "hflat/geometry.hpp"
#include "hflat/rng.hpp"

namespace hflat {

struct LieHermitianStructure;

struct ModelFlags {
  bool chern_flat = false;
  bool riemann_flat = false;
  bool bismut_flat = false;
  bool kahler = false;
};

/// Levi-Civita blocks theta1 = alpha I and theta2 = beta E, E = [[0, 1], [-1, 0]],
/// as 1-forms in the coordinate basis (dz, dzbar).
struct RiemannianReference {
  FormValue alpha;
  FormValue beta;
};

struct HermitianModel {
  std::string name;
  int dim = 0;
  CoframeField coframe;
  ModelFlags flags;
  /// Mathematical domain of the chart (points where the coframe is defined and nondegenerate).
  std::function<bool(const ChartPoint&)> in_domain;
  /// Draws a candidate point of the default sampling region; callers filter with in_domain.
  std::function<ChartPoint(SplitMix64&)> sample;
  /// Coordinates are holomorphic and the coframe has no dzbar part.
  bool holomorphic_chart = true;

  /// T^k_ij at a point, flattened as ((k * n) + i) * n + j.
  std::function<std::vector<cplx>(const ChartPoint&)> reference_torsion;
  /// Squared norm of the Chern torsion tensor |T^c|^2.
  std::function<double(const ChartPoint&)> reference_chern_torsion_norm;
  std::function<RiemannianReference(const ChartPoint&)> reference_riemannian;
  /// Set for models built from a Lie algebra with a left-invariant structure.
  std::shared_ptr<const LieHermitianStructure> lie;

  /// Geometry at a point, after the domain check. Throws DomainError outside the domain.
  PointGeometry geometry(const ChartPoint& p, int order) const;
};

HermitianModel euclidean(int dim);
/// phi_i = sqrt(c) dz_i / |z| on C^2 minus the origin.
HermitianModel hopf_surface(double c = 1.0);
/// phi_1 = e^f dz_1, phi_2 = e^h dz_2 for holomorphic f, h in (z1, z2).
HermitianModel boothby(const Expr& f, const Expr& h, std::string f_text = "f", std::string h_text = "h");
/// phi_1 = dx, phi_2 = dy - 2xy dx on C^2.
HermitianModel complete_chern_flat();
/// Riemannian-flat surface from holomorphic (u, v, f); `scale` multiplies the coframe.
HermitianModel riemann_flat_triple(const Expr& u, const Expr& v, const Expr& f, double scale = 1.0,
                                   std::string label = "triple");
/// (u, v, f) = (z1, 0, z2) on C* x C, scaled to match the closed-form metric display.
HermitianModel triple_g1();
/// (u, v, f) = (z1, z2, i z1 z2) on C x {|z2| != 1}, scaled likewise.
HermitianModel triple_g2();
/// g = I + eps H(z, zbar) with H a seeded random Hermitian polynomial of degree <= 2,
/// orthonormalized by an upper-triangular Cholesky factor. Requires 0 <= eps < 0.2.
HermitianModel perturbed_metric(std::uint64_t seed, double epsilon, int dim);
/// Block-diagonal product on disjoint coordinate blocks.
HermitianModel product(const HermitianModel& a, const HermitianModel& b);
/// Coframe from a hermitian metric matrix field g_{i jbar}(z) given by expressions.
HermitianModel metric_model(std::string name, int dim, std::vector<Expr> g_entries);

/// Orthogonal complex structures on R^4 compatible with a fixed orientation, parametrized
/// by z in C; returns the 4 x 4 real matrix row-major.
std::vector<double> twistor_matrix(cplx z);

/// Uniform in the polydisc of the given radius.
ChartPoint sample_polydisc(SplitMix64& rng, int dim, double radius);

/// Random polynomial in z1..zn of total degree <= `degree`, coefficients on a rational grid.
std::string random_holomorphic_polynomial(SplitMix64& rng, int dim, int degree, double scale);

/// Catalog lookup by textual reference, e.g. "hopf", "hopf:c=2", "boothby:f=z2,h=0",
/// "complete-chern-flat", "g1", "g2", "triple:u=z1,v=z2,f=0", "perturbed:seed=3,eps=0.1,dim=3",
/// "euclidean:dim=3", "lie:algebra=su2+su2,structure=central-ce",
/// and products "hopf;euclidean:dim=1". Throws std::invalid_argument on unknown names.
HermitianModel model_by_name(const std::string& ref);
/// Names and short descriptions for listing.
std::vector<std::pair<std::string, std::string>> catalog_listing();

}  // namespace hflat

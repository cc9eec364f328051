#include <doctest.h>

#include <cmath>
#include <complex>

#include "hflat/catalog.hpp"
#include "hflat/errors.hpp"
#include "hflat/identities.hpp"
#include "hflat/linalg.hpp"

using namespace hflat;

namespace {

ChartPoint pt(std::initializer_list<cplx> c) { return ChartPoint{std::vector<cplx>(c)}; }

ChartPoint sample_in(const HermitianModel& m, std::uint64_t seed) {
  for (std::uint64_t a = 0;; ++a) {
    auto rng = SplitMix64::stream(seed, a);
    auto p = m.sample(rng);
    if (m.in_domain(p)) return p;
  }
}

using Residual = double (*)(PointGeometry&);

struct Named {
  const char* name;
  Residual fn;
};

const Named kGeneric[] = {
    {"chern structure", chern_structure_residual},
    {"torsion bianchi", chern_bianchi_torsion_residual},
    {"curvature bianchi", chern_bianchi_curvature_residual},
    {"riemannian structure", riemannian_structure_residual},
    {"gauduchon", gauduchon_residual},
    {"gray", gray_residual},
    {"chern curvature type", chern_curvature_type_residual},
    {"curvature torsion dbar", chern_curvature_torsion_dbar_residual},
    {"riem ijk lbar", riem_ijk_lbar_residual},
    {"riem ij kbar lbar", riem_ij_kbar_lbar_residual},
    {"riem i jbar k lbar", riem_i_jbar_k_lbar_residual},
    {"riem holomorphic", riem_holomorphic_vanish_residual},
    {"chern torsion norm", chern_torsion_norm_residual},
    {"bismut torsion norm", bismut_torsion_norm_residual},
    {"bismut skew", bismut_torsion_skew_residual},
};

const Named kBismutFlat[] = {
    {"holomorphic parallel", bismut_holomorphic_parallel_residual},
    {"jacobi", bismut_torsion_jacobi_residual},
    {"dbar symmetry", bismut_dbar_symmetry_residual},
    {"dbar quadratic", bismut_dbar_quadratic_residual},
    {"eta trace", bismut_eta_trace_residual},
    {"ddbar omega", bismut_ddbar_omega_residual},
    {"agricola friedrich", agricola_friedrich_residual},
};

/// Complex Hessian d^2 |T|^2 / dz_a dzbar_b from the jet of |T|^2, moved to the frame.
std::vector<cplx> jet_hessian_in_frame(PointGeometry& g) {
  const int n = g.dim();
  const auto& T = g.torsion();
  Jet f(T.data.front().space());
  for (const auto& t : T.data) f += t * conj(t);
  const auto& Mi = g.inverse_frame_matrix();
  std::vector<cplx> K(n * n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          K[m * n + l] += f.derivative(a).derivative(n + b).value() * Mi[a * 2 * n + m].value() *
                          Mi[(n + b) * 2 * n + n + l].value();
  return K;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double r = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) r = std::max(r, std::abs(a[k] - b[k]));
  return r;
}

}  // namespace

TEST_CASE("general identities hold on perturbed metrics") {
  for (int dim : {1, 2, 3}) {
    for (std::uint64_t seed : {1u, 7u}) {
      const auto m = perturbed_metric(seed, 0.15, dim);
      const auto p = sample_in(m, seed);
      auto g = m.geometry(p, 3);
      for (const auto& c : kGeneric) {
        CAPTURE(c.name);
        CAPTURE(dim);
        CHECK(c.fn(g) < 1e-9);
      }
      if (dim == 2) CHECK(surface_eta_residual(g) < 1e-12);
    }
  }
}

TEST_CASE("bismut-flat identities are not vacuous on generic metrics") {
  const auto m = perturbed_metric(3, 0.15, 2);
  auto g = m.geometry(sample_in(m, 3), 3);
  CHECK(g.torsion_norm2() > 1e-6);
  CHECK(bismut_curvature_norm(g) > 1e-3);
  double worst = 0.0;
  for (const auto& c : kBismutFlat) worst = std::max(worst, c.fn(g));
  CHECK(worst > 1e-4);
  CHECK(bismut_dbar_quadratic_residual(g) > 1e-4);
}

TEST_CASE("bismut-flat identities hold on hopf surfaces and products") {
  for (double c : {1.0, 2.5}) {
    const auto m = hopf_surface(c);
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto g = m.geometry(sample_in(m, s), 2);
      for (const auto& id : kBismutFlat) {
        CAPTURE(id.name);
        CHECK(id.fn(g) < 1e-9);
      }
      CHECK(bismut_curvature_norm(g) < 1e-9);
      CHECK(surface_eta_residual(g) < 1e-12);
    }
  }
  const auto prod = product(hopf_surface(), euclidean(1));
  auto g = prod.geometry(pt({0.3, cplx(0.4, -0.9), 0.2}), 2);
  for (const auto& id : kBismutFlat) {
    CAPTURE(id.name);
    CHECK(id.fn(g) < 1e-9);
  }
}

TEST_CASE("eta trace on hopf equals two thirds of |T|^2 - 2|eta|^2") {
  // |T|^2 = 1/(2c) and |eta|^2 = 1/(4c) everywhere on the Hopf surface, so both sides vanish.
  auto g = hopf_surface(2.0).geometry(pt({1.0, 0.0}), 2);
  CHECK(g.torsion_norm2() == doctest::Approx(0.25));
  CHECK(bismut_eta_trace_residual(g) < 1e-12);
}

TEST_CASE("flatness norms match model flags") {
  auto hopf = hopf_surface().geometry(pt({0.7, cplx(0.2, 0.5)}), 2);
  CHECK(bismut_curvature_norm(hopf) < 1e-10);
  CHECK(chern_curvature_norm(hopf) > 0.1);
  auto g1 = triple_g1().geometry(pt({0.8, cplx(0.3, 0.1)}), 2);
  CHECK(riemannian_curvature_norm(g1) < 1e-10);
  CHECK(reference_riemannian_residual(triple_g1(), pt({0.8, cplx(0.3, 0.1)}), g1) < 1e-10);
  auto ccf = complete_chern_flat().geometry(pt({0.5, 0.5}), 2);
  CHECK(chern_curvature_norm(ccf) < 1e-12);
  CHECK(reference_torsion_residual(complete_chern_flat(), pt({0.5, 0.5}), ccf) < 1e-12);
}

TEST_CASE("balanced but non-Kahler detection") {
  auto e = euclidean(2).geometry(pt({0.1, 0.2}), 1);
  CHECK(balanced_kahler_residual(e) == 0.0);
  auto h = hopf_surface().geometry(pt({1.0, 0.0}), 1);
  CHECK(balanced_kahler_residual(h) == 0.0);  // eta != 0, hypothesis fails
}

TEST_CASE("finite-difference complex hessian of |T|^2 matches the jet hessian") {
  for (int dim : {2, 3}) {
    const auto m = perturbed_metric(11, 0.15, dim);
    const auto p = sample_in(m, 5);
    auto g3 = m.geometry(p, 3);
    auto g1 = m.geometry(p, 1);
    const auto exact = jet_hessian_in_frame(g3);
    const auto fd = psh_difference_side(m, p, g1);
    CAPTURE(dim);
    CHECK(max_diff(exact, fd) < 1e-6);
  }
}

TEST_CASE("exact psh side equals jet hessian on bismut-flat hopf") {
  const auto m = hopf_surface(1.5);
  const auto p = pt({cplx(0.6, 0.3), cplx(-0.4, 0.9)});
  auto g = m.geometry(p, 3);
  CHECK(max_diff(psh_exact_side(g), jet_hessian_in_frame(g)) < 1e-10);
  CHECK(psh_residual(m, p, g) < 1e-6);
  CHECK(psh_min_eigenvalue(m, p, g) > -1e-6);
}

TEST_CASE("inapplicable identities are rejected") {
  auto g = euclidean(3).geometry(pt({0.0, 0.0, 0.0}), 3);
  CHECK_THROWS_AS(surface_eta_residual(g), ApplicabilityError);
  auto low = euclidean(2).geometry(pt({0.0, 0.0}), 2);
  CHECK_THROWS_AS(chern_bianchi_curvature_residual(low), JetError);
}

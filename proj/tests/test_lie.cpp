#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>

#include "hflat/errors.hpp"
#include "hflat/lie.hpp"

using namespace hflat;

namespace {

const char* kAlgebras[] = {"abelian-2", "abelian-4", "abelian-6", "su2", "su2+r", "su2+r3", "su2+su2", "su2+su2+r2"};

/// Image of each labelled basis vector under J, as a map label -> label with sign.
double entry(const LieAlgebra& a, const ComplexStructure& J, const std::string& to, const std::string& from) {
  return J(a.index_of(to), a.index_of(from));
}

using V4 = std::array<double, 4>;

/// su(2)+R with basis (X, Y, Z, W): [u, v] = 2 u x v on the first three slots.
V4 bracket_su2r(const V4& u, const V4& v) {
  return {2 * (u[1] * v[2] - u[2] * v[1]), 2 * (u[2] * v[0] - u[0] * v[2]), 2 * (u[0] * v[1] - u[1] * v[0]), 0.0};
}

/// Brute-force Nijenhuis-type residual for a 4x4 J given by its images of the basis.
double nijenhuis_su2r(const std::array<V4, 4>& images) {
  auto J = [&](const V4& v) {
    V4 out{};
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) out[k] += v[i] * images[i][k];
    return out;
  };
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      V4 x{}, y{};
      x[i] = 1;
      y[j] = 1;
      V4 inner = bracket_su2r(x, y), jj = bracket_su2r(J(x), J(y));
      for (int k = 0; k < 4; ++k) inner[k] -= jj[k];
      const V4 lhs = J(inner), r1 = bracket_su2r(J(x), y), r2 = bracket_su2r(x, J(y));
      for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(lhs[k] - r1[k] - r2[k]));
    }
  return worst;
}

}  // namespace

TEST_CASE("catalog algebras are Lie algebras with bi-invariant metrics") {
  for (const char* name : kAlgebras) {
    const auto a = lie_algebra(name);
    CAPTURE(name);
    CHECK(antisymmetry_residual(a) == 0.0);
    CHECK(jacobi_residual(a) < 1e-12);
    CHECK(ad_skew_residual(a) < 1e-12);
    REQUIRE(a.root_datum);
    CHECK(root_space_residual(a, *a.root_datum) < 1e-12);
  }
  const auto su2 = lie_algebra("su2");
  CHECK(su2.constant(su2.index_of("Z"), su2.index_of("X"), su2.index_of("Y")) == 2.0);
  CHECK(su2.constant(su2.index_of("Y"), su2.index_of("Z"), su2.index_of("X")) == 2.0);
  CHECK_THROWS_AS(lie_algebra("so5"), std::invalid_argument);
}

TEST_CASE("abelian structures are integrable and Kahler") {
  const auto a = lie_algebra("abelian-4");
  const auto J = named_structure(a, "standard");
  CHECK(integrability_residual(a, J) == 0.0);
  const auto rep = algebraic_bismut_check(a, J);
  CHECK(rep.kahler);
  CHECK(rep.torsion_norm2 == 0.0);
}

TEST_CASE("su(2)+R standard structure matches the explicit one and is integrable") {
  const auto a = lie_algebra("su2+r");
  const auto J = named_structure(a, "standard");
  CHECK(entry(a, J, "X", "W") == doctest::Approx(1.0));
  CHECK(entry(a, J, "Z", "Y") == doctest::Approx(1.0));
  CHECK(square_residual(J) < 1e-12);
  CHECK(orthogonality_residual(a, J) < 1e-12);
  CHECK(integrability_residual(a, J) < 1e-12);
  // Oracle: JW = X, JX = -W, JY = Z, JZ = -Y evaluated by brute force.
  CHECK(nijenhuis_su2r({V4{0, 0, 0, -1}, V4{0, 0, 1, 0}, V4{0, -1, 0, 0}, V4{1, 0, 0, 0}}) < 1e-12);
}

TEST_CASE("reversed su(2) orientation is still integrable by brute force") {
  const auto a = lie_algebra("su2+r");
  const auto J = named_structure(a, "reversed");
  CHECK(entry(a, J, "Z", "Y") == doctest::Approx(-1.0));
  CHECK(entry(a, J, "X", "W") == doctest::Approx(1.0));
  const double oracle = nijenhuis_su2r({V4{0, 0, 0, -1}, V4{0, 0, -1, 0}, V4{0, 1, 0, 0}, V4{1, 0, 0, 0}});
  CHECK(oracle < 1e-12);
  CHECK(integrability_residual(a, J) < 1e-12);
}

TEST_CASE("a rotated structure is orthogonal but not integrable") {
  const auto a = lie_algebra("su2+su2");
  const auto J = named_structure(a, "nonintegrable");
  CHECK(square_residual(J) < 1e-12);
  CHECK(orthogonality_residual(a, J) < 1e-12);
  CHECK(integrability_residual(a, J) > 1.0);
  CHECK(samelson_conditions(a, J).closure > 0.1);
  CHECK_THROWS_AS(algebraic_bismut_check(a, J), ApplicabilityError);
}

TEST_CASE("samelson construction reproduces the named structures") {
  SUBCASE("central Calabi-Eckmann") {
    const auto a = lie_algebra("su2+su2");
    const auto J = named_structure(a, "central-ce");
    CHECK(entry(a, J, "X1", "X") == doctest::Approx(1.0));
    CHECK(entry(a, J, "Z", "Y") == doctest::Approx(1.0));
    CHECK(entry(a, J, "Z1", "Y1") == doctest::Approx(1.0));
    const auto c = samelson_conditions(a, J);
    CHECK(c.isotropy < 1e-12);
    CHECK(c.span_rank == 6);
    CHECK(c.closure < 1e-12);
  }
  SUBCASE("su(2)+R^3") {
    const auto a = lie_algebra("su2+r3");
    const auto J = named_structure(a, "standard");
    CHECK(entry(a, J, "Z", "Y") == doctest::Approx(1.0));
    CHECK(entry(a, J, "W1", "X") == doctest::Approx(1.0));
    CHECK(entry(a, J, "W3", "W2") == doctest::Approx(1.0));
    CHECK(integrability_residual(a, J) < 1e-12);
  }
  SUBCASE("mixed torus structures") {
    const auto a = lie_algebra("su2+su2+r2");
    for (double t : {0.0, 0.3, 0.7854, 1.2, 2.5}) {
      const double ca = std::cos(t), cb = std::sin(t);
      char ref[96];
      std::snprintf(ref, sizeof ref, "mixed:a=%.17g,b=%.17g", ca, cb);
      const auto J = named_structure(a, ref);
      CAPTURE(t);
      CHECK(square_residual(J) < 1e-12);
      CHECK(integrability_residual(a, J) < 1e-10);
    }
    const auto J = named_structure(a, "mixed:a=0.6,b=0.8");
    CHECK(square_residual(J) < 1e-12);
    CHECK(orthogonality_residual(a, J) < 1e-12);
    CHECK(integrability_residual(a, J) < 1e-10);
    CHECK(entry(a, J, "X1", "X") == doctest::Approx(0.6));
    CHECK(entry(a, J, "W1", "X") == doctest::Approx(0.8));
    CHECK(entry(a, J, "W2", "X1") == doctest::Approx(-0.8));
    const auto c = samelson_conditions(a, J);
    CHECK(c.span_rank == 8);
    CHECK(c.isotropy < 1e-12);
    CHECK_THROWS_AS(named_structure(a, "mixed:a=0.6,b=0.6"), std::invalid_argument);
  }
}

TEST_CASE("root choices must be closed under addition") {
  // Rank-2 datum with roots a1, a2, a1 + a2 (the shape of su(3)); brackets are irrelevant here.
  LieAlgebra fake;
  fake.name = "fake";
  fake.dim = 8;
  fake.c.assign(512, 0.0);
  fake.g.assign(64, 0.0);
  RootDatum d;
  d.torus = {std::vector<double>(8, 0.0), std::vector<double>(8, 0.0)};
  d.roots = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  d.root_vectors.assign(3, std::vector<cplx>(8, 0.0));
  const std::vector<double> tj{0.0, -1.0, 1.0, 0.0};
  try {
    samelson_structure(fake, d, tj, {1, 1, -1});
    FAIL("expected a closure violation");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("roots 1 and 2") != std::string::npos);
  }
}

TEST_CASE("algebraic Bismut flatness") {
  for (const auto& [alg, st] : std::vector<std::pair<std::string, std::string>>{
           {"su2+su2", "central-ce"}, {"su2+r", "standard"}, {"su2+r3", "standard"}, {"su2+su2+r2", "mixed:a=0.6,b=0.8"}}) {
    const auto a = lie_algebra(alg);
    const auto rep = algebraic_bismut_check(a, named_structure(a, st));
    CAPTURE(alg);
    CHECK(rep.torsion_vs_structure < 1e-12);
    CHECK(rep.bismut_coefficients < 1e-12);
    CHECK(rep.torsion_jacobi < 1e-12);
    CHECK(rep.dbar_quadratic < 1e-12);
    CHECK_FALSE(rep.kahler);
  }
  auto a = lie_algebra("su2+r");
  a.g[0] = 2.0;  // stretch X: no longer ad-invariant
  CHECK_THROWS_AS(algebraic_bismut_check(a, named_structure(lie_algebra("su2+r"), "standard")), ApplicabilityError);
}

TEST_CASE("exponential chart coframe") {
  SUBCASE("identity at the origin") {
    const auto a = lie_algebra("su2+su2");
    const auto m = lie_group_model(a, named_structure(a, "central-ce"), "central-ce");
    const auto c = m.coframe.coefficients(lift_point(ChartPoint{{0.0, 0.0, 0.0}}, 0));
    // phi_k(dx) = <dx, conj e_k>: each row carries weight 1/sqrt(2) on two real directions,
    // which become (1/2)(dz + dzbar) or (-i/2)(dz - dzbar).
    double total = 0.0;
    for (const auto& x : c) total += std::norm(x.value());
    CHECK(total == doctest::Approx(1.5));
  }
  SUBCASE("abelian chart is constant and flat") {
    const auto a = lie_algebra("abelian-4");
    const auto m = lie_group_model(a, named_structure(a, "standard"), "standard", 3);
    auto g = m.geometry(ChartPoint{{cplx(0.1, 0.2), cplx(-0.3, 0.1)}}, 2);
    CHECK(g.chern_curvature().max_abs() == 0.0);
    CHECK(g.torsion_norm2() == 0.0);
    CHECK(m.flags.kahler);
  }
  SUBCASE("Calabi-Eckmann group is Bismut flat in the chart") {
    const auto a = lie_algebra("su2+su2");
    const auto J = named_structure(a, "central-ce");
    const auto m = lie_group_model(a, J, "central-ce", 20);
    CHECK(m.flags.bismut_flat);
    CHECK_FALSE(m.holomorphic_chart);
    const double alg_norm = algebraic_bismut_check(a, J).torsion_norm2;
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto rng = SplitMix64::stream(9, s);
      const auto p = m.sample(rng);
      REQUIRE(m.in_domain(p));
      auto g = m.geometry(p, 2);
      CHECK(g.bismut_curvature().max_abs() < 1e-10);
      CHECK(g.chern_curvature().max_abs() > 0.1);
      CHECK(g.torsion_norm2() == doctest::Approx(alg_norm).epsilon(1e-10));
    }
  }
  SUBCASE("short truncations are rejected where the bound is large") {
    const auto a = lie_algebra("su2+su2");
    const std::vector<double> x{0.5, 0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(truncation_bound(a, x, 20) < 1e-12);
    CHECK(truncation_bound(a, x, 2) > truncation_bound(a, x, 3));
    const auto m = lie_group_model(a, named_structure(a, "central-ce"), "central-ce", 2, 0.5, 1e-6);
    CHECK_FALSE(m.in_domain(ChartPoint{{0.5, 0.0, 0.0}}));
    CHECK(m.in_domain(ChartPoint{{0.0, 0.0, 0.0}}));
    CHECK_FALSE(lie_group_model(a, named_structure(a, "central-ce"), "central-ce").in_domain(ChartPoint{{0.6, 0.0, 0.0}}));
  }
}

#include <random>

#include "doctest.h"
#include "hflat/errors.hpp"
#include "hflat/expr.hpp"
#include "hflat/forms.hpp"
#include "random_expr.hpp"

using namespace hflat;

namespace {

FormValue basis1(int n, int slot) {
  FormValue f(n, 1);
  f.add(Mask{1} << slot, 1.0);
  return f;
}

// Random jet-valued k-form in dimension n with expression-backed coefficients.
JetForm random_field(testing::ExprGen& gen, int n, int degree, const std::vector<Jet>& z, int terms) {
  JetForm f(n, degree, Jet(z[0].space()));
  std::uniform_int_distribution<Mask> pick(0, (Mask{1} << (2 * n)) - 1);
  int added = 0;
  while (added < terms) {
    const Mask m = pick(gen.rng());
    if (popcount(m) != degree) continue;
    f.add(m, eval_expr(parse_expr(gen.expression(2), n), z));
    ++added;
  }
  return f;
}

}  // namespace

TEST_CASE("wedge sign rules") {
  const int n = 2;
  const auto dz1 = basis1(n, 0), dz2 = basis1(n, 1), dzb1 = basis1(n, 2), dzb2 = basis1(n, 3);
  CHECK(wedge(dz1, dz1).empty());
  const auto a = wedge(dzb1, dz1);
  CHECK(a.value(0b0101) == -1.0);
  const auto b = wedge(wedge(dz1, dzb1), wedge(dz2, dzb2));
  const auto c = wedge(wedge(dz2, dzb2), wedge(dz1, dzb1));
  CHECK(b.value(0b1111) == c.value(0b1111));
  // dz1 ^ dzb1 ^ dz2 ^ dzb2 = - dz1 ^ dz2 ^ dzb1 ^ dzb2 in canonical order.
  CHECK(b.value(0b1111) == -1.0);
}

TEST_CASE("graded commutativity and associativity on random values") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  auto random_value = [&](int n, int degree) {
    FormValue f(n, degree);
    for (Mask m = 0; m < (Mask{1} << (2 * n)); ++m)
      if (popcount(m) == degree) f.add(m, cplx(g(rng), g(rng)));
    return f;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_value(3, 1 + trial % 3), b = random_value(3, 2), c = random_value(3, 1);
    const int sign = (a.degree() * b.degree()) % 2 ? -1 : 1;
    const auto ab = wedge(a, b), ba = wedge(b, a);
    for (const auto& [m, v] : ab.terms()) CHECK(std::abs(v - double(sign) * ba.value(m)) < 1e-12);
    const auto left = wedge(wedge(a, b), c), right = wedge(a, wedge(b, c));
    CHECK((left - right).max_abs() < 1e-12);
  }
}

TEST_CASE("type projection") {
  const int n = 2;
  const auto dz1 = basis1(n, 0), dz2 = basis1(n, 1), dzb1 = basis1(n, 2);
  const auto v = wedge(dz1, dzb1);
  CHECK((v.type_part(1, 1) - v).max_abs() == 0.0);
  CHECK(v.type_part(2, 0).empty());
  const auto w = wedge(dz1, dz2);
  CHECK((w.type_part(2, 0) - w).max_abs() == 0.0);
  CHECK_THROWS_AS(w.type_part(1, 0), std::invalid_argument);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  FormValue r(3, 2);
  for (Mask m = 0; m < 64; ++m)
    if (popcount(m) == 2) r.add(m, cplx(g(rng), g(rng)));
  const auto sum = r.type_part(2, 0) + r.type_part(1, 1) + r.type_part(0, 2);
  for (const auto& [m, c] : r.terms()) CHECK(sum.value(m) == c);
}

TEST_CASE("conjugation") {
  const int n = 2;
  FormValue f(n, 2);
  f.add(0b0011, cplx(1, 2));  // dz1 ^ dz2
  f.add(0b0110, cplx(0, 1));  // dz2 ^ dzb1
  const auto c = conj(f);
  CHECK(c.value(0b1100) == cplx(1, -2));  // dzb1 ^ dzb2
  // conj(dz2 ^ dzb1) = dzb2 ^ dz1 = -dz1 ^ dzb2
  CHECK(c.value(0b1001) == cplx(0, 1));
  const auto cc = conj(c);
  for (const auto& [m, v] : f.terms()) CHECK(cc.value(m) == v);
}

TEST_CASE("exterior derivative examples") {
  const auto z = lift_point({{cplx(0.4, 0.1), cplx(-0.2, 0.3)}}, 2);
  const Jet zero(z[0].space());
  SUBCASE("d(zbar1 dz1) = dzbar1 ^ dz1") {
    JetForm f(2, 1, zero);
    f.add(0b0001, conj(z[0]));
    const auto d = exterior_d(f);
    CHECK(d.value(0b0101) == -1.0);
    CHECK(d.max_abs() == 1.0);
  }
  SUBCASE("d(dz1) = 0") {
    JetForm f(2, 1, zero);
    f.add(0b0001, Jet(z[0].space(), 1.0));
    CHECK(exterior_d(f).max_abs() == 0.0);
  }
  SUBCASE("order 0 coefficients are rejected") {
    const auto z0 = lift_point({{0.0, 0.0}}, 0);
    JetForm f(2, 1, Jet(z0[0].space()));
    f.add(0b0001, z0[0]);
    CHECK_THROWS_AS(exterior_d(f), JetError);
  }
}

TEST_CASE("ddbar log(1+|z1|^2) at the origin") {
  // log(1+|z|^2) = |z|^2 - |z|^4/2 + ..., so the dz ^ dzbar coefficient of ddbar is 1 at 0.
  const auto z = lift_point({{0.0}}, 2);
  JetForm f(1, 0, Jet(z[0].space()));
  f.add(0, log(1.0 + z[0] * conj(z[0])));
  const auto d = exterior_d(f);
  const auto dbar = d.type_part(0, 1);
  const auto ddbar = exterior_d(dbar).type_part(1, 1);
  CHECK(std::abs(ddbar.value(0b11) - 1.0) < 1e-15);
}

TEST_CASE("d^2 = 0 on random expression-backed 1-forms") {
  testing::ExprGen gen(2, 11);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto z = lift_point({{{u(gen.rng()), u(gen.rng())}, {u(gen.rng()), u(gen.rng())}}}, 2);
    const auto f = random_field(gen, 2, 1, z, 3);
    worst = std::max(worst, exterior_d(exterior_d(f)).max_abs());
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("d is an antiderivation") {
  testing::ExprGen gen(3, 12);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<cplx> p;
    for (int k = 0; k < 3; ++k) p.emplace_back(u(gen.rng()), u(gen.rng()));
    const auto z = lift_point({p}, 2);
    const int da = 1 + trial % 2;
    const auto a = random_field(gen, 3, da, z, 2);
    const auto b = random_field(gen, 3, 1, z, 2);
    const auto lhs = exterior_d(wedge(a, b));
    auto rhs = wedge(exterior_d(a), truncate(b, 1));
    const auto second = wedge(truncate(a, 1), exterior_d(b));
    rhs += (da % 2 ? -1.0 : 1.0) * second;
    worst = std::max(worst, (lhs - rhs).max_abs());
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("basis change round trip") {
  // Change basis with L then with its inverse: the identity up to rounding.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  FormValue f(2, 2);
  for (Mask m = 0; m < 16; ++m)
    if (popcount(m) == 2) f.add(m, cplx(g(rng), g(rng)));
  // Triangular L with unit diagonal has an explicit inverse for a 2x2 block pattern.
  std::vector<cplx> L(16, 0.0), Linv(16, 0.0);
  for (int a = 0; a < 4; ++a) L[a * 4 + a] = Linv[a * 4 + a] = 1.0;
  const cplx s(0.3, -0.7);
  L[0 * 4 + 2] = s;
  Linv[0 * 4 + 2] = -s;
  BasisChange<cplx> fwd(2, L, 0.0), back(2, Linv, 0.0);
  const auto g2 = back.apply(fwd.apply(f));
  CHECK((g2 - f).max_abs() < 1e-15);
}

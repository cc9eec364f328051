#include <cmath>
#include <random>

#include "doctest.h"
#include "hflat/errors.hpp"
#include "hflat/expr.hpp"
#include "hflat/jet.hpp"
#include "random_expr.hpp"

using namespace hflat;

namespace {

// Central-difference Wirtinger derivatives of a scalar function of the chart point.
template <class F>
cplx fd_wirtinger(F&& f, std::vector<cplx> z, int slot, double h) {
  const int n = static_cast<int>(z.size());
  const int k = slot % n;
  const bool bar = slot >= n;
  auto shifted = [&](cplx dz) {
    auto w = z;
    w[k] += dz;
    return f(w);
  };
  const cplx fx = (shifted(h) - shifted(-h)) / (2 * h);
  const cplx fy = (shifted(cplx(0, h)) - shifted(cplx(0, -h))) / (2 * h);
  const cplx i(0, 1);
  return bar ? 0.5 * (fx + i * fy) : 0.5 * (fx - i * fy);
}

bool close_rel(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

}  // namespace

TEST_CASE("seeded coordinate jets") {
  SUBCASE("z1 at (2+i, 0)") {
    const auto j = lift_coordinate({{cplx(2, 1), 0.0}}, 1, false, 2);
    CHECK(j.value == cplx(2, 1));
    CHECK(j.d1 == std::vector<cplx>{1.0, 0.0, 0.0, 0.0});
    for (auto x : j.d2) CHECK(x == 0.0);
  }
  SUBCASE("zbar2 at (0, 3i)") {
    const auto j = lift_coordinate({{0.0, cplx(0, 3)}}, 2, true, 2);
    CHECK(j.value == cplx(0, -3));
    CHECK(j.d1 == std::vector<cplx>{0.0, 0.0, 0.0, 1.0});
    for (auto x : j.d2) CHECK(x == 0.0);
  }
  SUBCASE("order 0 carries the value only") {
    const auto j = lift_coordinate({{cplx(2, 1), 0.0}}, 1, false, 0);
    CHECK(j.value == cplx(2, 1));
    for (auto x : j.d1) CHECK(x == 0.0);
  }
  SUBCASE("index out of range") {
    CHECK_THROWS_AS(lift_coordinate({{1.0, 2.0}}, 3, false, 1), std::out_of_range);
    CHECK_THROWS_AS(lift_coordinate({{1.0, 2.0}}, 0, false, 1), std::out_of_range);
  }
}

TEST_CASE("arithmetic on elementary functions") {
  const auto z = lift_point({{1.0}}, 2);
  SUBCASE("z conj(z) at 1") {
    const auto j = Jet2::from(z[0] * conj(z[0]));
    CHECK(j.value == 1.0);
    CHECK(j.d1[0] == 1.0);
    CHECK(j.d1[1] == 1.0);
    CHECK(j.hessian(0, 1) == 1.0);
    CHECK(j.hessian(0, 0) == 0.0);
  }
  SUBCASE("exp(z) at 0 is holomorphic") {
    const auto z0 = lift_point({{0.0}}, 2);
    const auto j = Jet2::from(exp(z0[0]));
    CHECK(j.value == 1.0);
    CHECK(j.d1[0] == 1.0);
    CHECK(j.d1[1] == 0.0);
    CHECK(j.hessian(0, 0) == 1.0);
  }
  SUBCASE("1/(1+|z|^2) at 1 against finite differences") {
    auto f = [](const std::vector<cplx>& w) { return 1.0 / (1.0 + std::norm(w[0])); };
    const auto j = Jet2::from(1.0 / (1.0 + z[0] * conj(z[0])));
    CHECK(j.value == 0.5);
    const cplx fd = fd_wirtinger(f, {1.0}, 0, 1e-5);
    CHECK(std::abs(fd - cplx(-0.25)) < 1e-9);
    CHECK(std::abs(j.d1[0] - fd) < 1e-9);
    CHECK(std::abs(j.d1[0] - cplx(-0.25)) < 1e-15);
  }
}

TEST_CASE("d2 is symmetric by construction") {
  const auto z = lift_point({{cplx(0.3, -0.2), cplx(0.1, 0.5)}}, 2);
  const auto j = Jet2::from(exp(z[0] * conj(z[1])) * sin(conj(z[0]) + z[1] * z[1]));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(j.hessian(a, b) == j.hessian(b, a));
}

TEST_CASE("branch cuts and division by zero") {
  const auto z = lift_point({{-2.0}}, 1);
  CHECK_THROWS_AS(log(z[0]), JetError);
  CHECK_THROWS_AS(sqrt(z[0]), JetError);
  const auto zero = lift_point({{0.0}}, 1);
  CHECK_THROWS_AS(1.0 / zero[0], JetError);
  CHECK_THROWS_AS(sqrt(zero[0]), JetError);
  CHECK_NOTHROW(sqrt(lift_point({{0.0}}, 0)[0]));
  try {
    log(z[0]);
  } catch (const JetError& e) {
    CHECK(std::string(e.what()).find("-2") != std::string::npos);
  }
}

TEST_CASE("conj is an involution, bitwise") {
  const auto z = lift_point({{cplx(0.3, -0.2), cplx(0.7, 0.5)}}, 3);
  const Jet f = exp(z[0] * conj(z[1])) / (2.0 + z[1] * conj(z[0]));
  const Jet g = conj(conj(f));
  const auto a = f.coefficients(), b = g.coefficients();
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}

TEST_CASE("holomorphic expressions have vanishing antiholomorphic derivatives") {
  const auto z = lift_point({{cplx(0.3, -0.2), cplx(0.7, 0.5)}}, 2);
  const Jet f = exp(z[0] * z[1]) / (2.0 + z[1]) + log(3.0 + z[0]) * sqrt(4.0 + z[1] * z[1]) + pow(z[0], -2);
  for (int a = 2; a < 4; ++a) CHECK(std::abs(f.d1(a)) < 1e-14);
  for (int a = 0; a < 4; ++a)
    for (int b = 2; b < 4; ++b) CHECK(std::abs(f.d2(a, b)) < 1e-14);
}

TEST_CASE("higher orders agree with nested derivatives") {
  const auto z = lift_point({{cplx(0.3, -0.2), cplx(0.1, 0.4)}}, 4);
  const Jet f = exp(z[0] * conj(z[1])) * cos(z[1] + conj(z[0]) * z[0]);
  // Mixed fourth derivative d_0 d_1 d_2 d_3 two ways.
  const Jet g = f.derivative(0).derivative(1).derivative(2).derivative(3);
  const Jet h = f.derivative(3).derivative(2).derivative(1).derivative(0);
  CHECK(std::abs(g.value() - h.value()) < 1e-12);
  // Second derivative from the truncated order-2 jet agrees with nesting.
  CHECK(std::abs(f.truncate(2).d2(0, 2) - f.derivative(0).derivative(2).value()) < 1e-13);
}

TEST_CASE("random expressions match finite differences") {
  testing::ExprGen gen(2, 20240611);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string text = gen.expression(3);
    const Expr e = parse_expr(text, 2);
    const std::vector<cplx> p{{u(gen.rng()), u(gen.rng())}, {u(gen.rng()), u(gen.rng())}};
    auto value = [&](const std::vector<cplx>& w) { return eval_value(e, w); };
    const Jet2 j = eval_jet(e, ChartPoint{p}, 2);
    for (int a = 0; a < 4; ++a) {
      const cplx fd = fd_wirtinger(value, p, a, 1e-5);
      INFO(text);
      CHECK(close_rel(j.d1[a], fd, 1e-7));
      // Second derivatives: finite differences of exact first derivatives.
      for (int b = 0; b < 4; ++b) {
        auto d1 = [&](const std::vector<cplx>& w) { return eval_jet(e, ChartPoint{w}, 1).d1[a]; };
        const cplx fd2 = fd_wirtinger(d1, p, b, 1e-5);
        CHECK(close_rel(j.hessian(a, b), fd2, 1e-5));
      }
    }
    ++checked;
  }
  CHECK(checked == 1000);
}

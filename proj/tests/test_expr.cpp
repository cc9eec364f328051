#include <random>

#include "doctest.h"
#include "hflat/errors.hpp"
#include "hflat/expr.hpp"
#include "random_expr.hpp"

using namespace hflat;

namespace {

Expr var(int k) { return Expr::variable(k); }

Expr node(Op op, Expr lhs, Expr rhs = {}) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = lhs.shared_root();
  n->rhs = rhs.shared_root();
  return Expr(std::move(n));
}

}  // namespace

TEST_CASE("grammar produces the expected tree") {
  const Expr e = parse_expr("z1*conj(z2) + exp(i*z1)", 2);
  const Expr expected = node(Op::Add, node(Op::Mul, var(1), node(Op::Conj, var(2))),
                             node(Op::Exp, node(Op::Mul, Expr::constant(cplx(0, 1)), var(1))));
  CHECK(structurally_equal(e, expected));
  CHECK(structurally_equal(parse_expr("0", 1), Expr::constant(0.0)));
  CHECK(parse_expr("0", 1).is_zero_literal());
}

TEST_CASE("precedence: ^ over unary minus over * / over + -") {
  CHECK(structurally_equal(parse_expr("-z1^2", 1), node(Op::Neg, parse_expr("z1^2", 1))));
  CHECK(structurally_equal(parse_expr("1+2*z1", 1), parse_expr("1+(2*z1)", 1)));
  CHECK(structurally_equal(parse_expr("1-2-3", 1), parse_expr("(1-2)-3", 1)));
  CHECK(structurally_equal(parse_expr("-z1*z1", 1), parse_expr("(-z1)*z1", 1)));
  CHECK(structurally_equal(parse_expr(" z1 ^ -2 ", 1), parse_expr("z1^-2", 1)));
}

TEST_CASE("literals") {
  const auto p = ChartPoint{{0.0}};
  CHECK(eval_jet(parse_expr("2i", 1), p, 0).value == cplx(0, 2));
  CHECK(eval_jet(parse_expr("1.5e1", 1), p, 0).value == 15.0);
  CHECK(eval_jet(parse_expr("pi", 1), p, 0).value == std::numbers::pi);
  CHECK(eval_jet(parse_expr("i*i", 1), p, 0).value == -1.0);
}

TEST_CASE("parse errors carry offsets") {
  auto offset_of = [](const char* text, int dim) -> long {
    try {
      parse_expr(text, dim);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("z1 +", 2) == 4);
  CHECK(offset_of("foo(z1)", 2) == 0);
  CHECK(offset_of("z1 * z3", 2) == 5);
  CHECK(offset_of("z1^1.5", 1) == 4);
  CHECK(offset_of("z1^z1", 1) == 3);
  CHECK(offset_of("(z1", 1) == 3);
  CHECK(offset_of("", 1) == 0);
  CHECK(offset_of("z0", 1) == 0);
}

TEST_CASE("sqrt(-1) parses but evaluation errors on the cut") {
  const Expr e = parse_expr("sqrt(-1)", 1);
  CHECK_THROWS_AS(eval_jet(e, ChartPoint{{0.3}}, 1), EvalError);
  CHECK_THROWS_AS(eval_value(e, std::vector<cplx>{0.3}), EvalError);
  try {
    eval_jet(parse_expr("z1 + 1/(z1-1)", 1), ChartPoint{{1.0}}, 1);
    FAIL("expected an evaluation error");
  } catch (const EvalError& err) {
    CHECK(err.offset() == 6);
  }
}

TEST_CASE("evaluation examples") {
  const auto a = eval_jet(parse_expr("z1^2", 2), ChartPoint{{3.0, 0.0}}, 1);
  CHECK(a.value == 9.0);
  CHECK(a.d1[0] == 6.0);
  const auto b = eval_jet(parse_expr("conj(z1)", 2), ChartPoint{{cplx(0, 1), 0.0}}, 1);
  CHECK(b.value == cplx(0, -1));
  CHECK(b.d1[2] == 1.0);
  const auto c = eval_jet(parse_expr("1/(1+z1*conj(z1)+z2*conj(z2))", 2), ChartPoint{{1.0, 0.0}}, 2);
  CHECK(c.value == 0.5);
}

TEST_CASE("print round-trips to a structurally equal tree") {
  testing::ExprGen gen(3, 99);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = gen.expression(3);
    const Expr e = parse_expr(text, 3);
    const Expr back = parse_expr(print_expr(e), 3);
    INFO(text);
    CHECK(structurally_equal(e, back));
    for (int k = 0; k < 10; ++k) {
      const ChartPoint p{{{u(gen.rng()), u(gen.rng())}, {u(gen.rng()), u(gen.rng())}, {u(gen.rng()), u(gen.rng())}}};
      const auto x = eval_jet(e, p, 1), y = eval_jet(back, p, 1);
      CHECK(std::abs(x.value - y.value) <= 1e-14 * std::max(1.0, std::abs(x.value)));
    }
  }
  CHECK(structurally_equal(parse_expr(print_expr(parse_expr("1e-5i + 1e300 - 0.1", 1)), 1),
                           parse_expr("1e-5i + 1e300 - 0.1", 1)));
}

TEST_CASE("parser is total on random bytes") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "z1234567890+-*/^()ijpexlogsqrtcnIEZ. \t#,e";
  std::uniform_int_distribution<int> len(0, 24), pick(0, static_cast<int>(alphabet.size()) - 1), byte(0, 255);
  int parsed = 0, rejected = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    std::string s;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) s += (trial % 5 == 0) ? static_cast<char>(byte(rng)) : alphabet[pick(rng)];
    try {
      const Expr e = parse_expr(s, 3);
      CHECK_FALSE(e.empty());
      ++parsed;
    } catch (const ParseError& err) {
      CHECK(err.offset() <= s.size());
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 100000);
  CHECK(parsed > 0);
  std::string deep(100000, '(');
  CHECK_THROWS_AS(parse_expr(deep, 1), ParseError);
}

TEST_CASE("conj detection and variable range") {
  CHECK(parse_expr("exp(z1)*z2", 2).contains_conj() == false);
  CHECK(parse_expr("exp(conj(z1))", 2).contains_conj() == true);
  CHECK(parse_expr("z1+z3", 3).max_variable() == 3);
}

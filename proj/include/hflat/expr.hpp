#pragma once

// Closed-form chart functions: a small infix language over z1..zn.
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' '-'? integer)?
//   primary := number | number 'i' | 'i' | 'pi' | 'z'k
//            | func '(' expr ')' | '(' expr ')'
//   func    := conj | exp | log | sqrt | sin | cos
//
// log and sqrt use the principal branch; evaluating exactly on the negative
// real axis is an error rather than a silent choice of side.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hflat/jet.hpp"

namespace hflat {

enum class Op {
  Num,
  Var,
  Neg,
  Conj,
  Exp,
  Log,
  Sqrt,
  Sin,
  Cos,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct ExprNode {
  Op op;
  std::size_t offset = 0;
  cplx number{};  // Num
  int index = 0;  // Var (1-based) or Pow exponent
  std::shared_ptr<const ExprNode> lhs, rhs;
};

/// Immutable expression tree; cheap to copy and safe to share across threads.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  static Expr constant(cplx value);
  static Expr variable(int index);

  const ExprNode* root() const { return root_.get(); }
  const std::shared_ptr<const ExprNode>& shared_root() const { return root_; }
  bool empty() const { return !root_; }
  /// Largest variable index used (0 for a constant expression).
  int max_variable() const;
  bool contains_conj() const;
  bool is_zero_literal() const;

 private:
  std::shared_ptr<const ExprNode> root_;
};

/// Throws ParseError with the byte offset of the problem.
Expr parse_expr(std::string_view text, int dim);

/// Canonical text that parses back to a structurally equal tree.
std::string print_expr(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Evaluates with z[k] the jet of z_{k+1}. Jet failures are rethrown as EvalError
/// carrying the offset of the failing subexpression.
Jet eval_expr(const Expr& e, std::span<const Jet> z);

/// Convenience wrapper: lift the point to jets of the given order and evaluate.
Jet2 eval_jet(const Expr& e, const ChartPoint& p, int order);

/// Plain complex evaluation (order-0 jets without the jet overhead).
cplx eval_value(const Expr& e, std::span<const cplx> z);

}  // namespace hflat

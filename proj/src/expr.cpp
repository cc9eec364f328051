#include "hflat/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "hflat/errors.hpp"

namespace hflat {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

constexpr int kMaxDepth = 256;

NodePtr make(Op op, std::size_t offset, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->offset = offset;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, int dim) : s_(text), dim_(dim) {}

  NodePtr run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    auto e = sum();
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p(p) {
      if (++p.depth_ > kMaxDepth) throw ParseError("expression nested too deeply", p.pos_);
    }
    ~DepthGuard() { --p.depth_; }
    Parser& p;
  };

  NodePtr sum() {
    DepthGuard g(*this);
    auto lhs = product();
    while (true) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        const std::size_t at = pos_;
        const Op op = s_[pos_] == '+' ? Op::Add : Op::Sub;
        ++pos_;
        lhs = make(op, at, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    auto lhs = unary();
    while (true) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
        const std::size_t at = pos_;
        const Op op = s_[pos_] == '*' ? Op::Mul : Op::Div;
        ++pos_;
        lhs = make(op, at, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    DepthGuard g(*this);
    skip();
    if (pos_ < s_.size() && s_[pos_] == '-') {
      const std::size_t at = pos_++;
      return make(Op::Neg, at, unary());
    }
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (!peek('^')) return base;
    const std::size_t at = pos_++;
    skip();
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
      skip();
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    if (start == pos_) throw ParseError("exponent must be an integer literal", start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || value > 1024) throw ParseError("exponent out of range", start);
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Pow;
    n->offset = at;
    n->index = negative ? -value : value;
    n->lhs = std::move(base);
    return n;
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && is_digit(s_[p])) {
        pos_ = p;
        while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || ptr != s_.data() + pos_ || !std::isfinite(value))
      throw ParseError("malformed number", start);
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Num;
    n->offset = start;
    // An 'i' directly after the digits makes the literal imaginary, unless it starts a longer word.
    if (pos_ < s_.size() && s_[pos_] == 'i' && !(pos_ + 1 < s_.size() && is_alpha(s_[pos_ + 1]))) {
      ++pos_;
      n->number = cplx(0.0, value);
    } else {
      n->number = cplx(value, 0.0);
    }
    return n;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (is_digit(c) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      auto e = sum();
      expect(')');
      return e;
    }
    if (!is_alpha(c)) throw ParseError(std::string("unexpected character '") + c + "'", pos_);

    const std::size_t start = pos_;
    while (pos_ < s_.size() && (is_alpha(s_[pos_]) || is_digit(s_[pos_]))) ++pos_;
    const std::string_view word = s_.substr(start, pos_ - start);

    if (word == "i") {
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Num;
      n->offset = start;
      n->number = cplx(0.0, 1.0);
      return n;
    }
    if (word == "pi") {
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Num;
      n->offset = start;
      n->number = std::numbers::pi;
      return n;
    }
    if (word.size() >= 2 && word[0] == 'z' && is_digit(word[1])) {
      int index = 0;
      auto [ptr, ec] = std::from_chars(word.data() + 1, word.data() + word.size(), index);
      if (ec != std::errc() || ptr != word.data() + word.size() || index < 1)
        throw ParseError("unknown identifier '" + std::string(word) + "'", start);
      if (index > dim_)
        throw ParseError("variable z" + std::to_string(index) + " exceeds dimension " + std::to_string(dim_), start);
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Var;
      n->offset = start;
      n->index = index;
      return n;
    }

    Op op;
    if (word == "conj") op = Op::Conj;
    else if (word == "exp") op = Op::Exp;
    else if (word == "log") op = Op::Log;
    else if (word == "sqrt") op = Op::Sqrt;
    else if (word == "sin") op = Op::Sin;
    else if (word == "cos") op = Op::Cos;
    else throw ParseError("unknown identifier '" + std::string(word) + "'", start);

    expect('(');
    auto arg = sum();
    expect(')');
    return make(op, start, std::move(arg));
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void print_node(const ExprNode* n, std::string& out) {
  switch (n->op) {
    case Op::Num: {
      const double re = n->number.real(), im = n->number.imag();
      if (im == 0.0 && !std::signbit(re)) {
        out += format_double(re);
      } else if (re == 0.0 && !std::signbit(re) && !std::signbit(im)) {
        out += format_double(im) + "i";
      } else {
        // Not produced by the parser; printed in an equivalent evaluable form.
        out += "(" + format_double(re) + (std::signbit(im) ? "-" : "+") + format_double(std::abs(im)) + "i)";
      }
      return;
    }
    case Op::Var:
      out += "z" + std::to_string(n->index);
      return;
    case Op::Neg:
      out += "(-";
      print_node(n->lhs.get(), out);
      out += ")";
      return;
    case Op::Conj:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
    case Op::Sin:
    case Op::Cos: {
      static constexpr const char* names[] = {"conj", "exp", "log", "sqrt", "sin", "cos"};
      out += names[static_cast<int>(n->op) - static_cast<int>(Op::Conj)];
      out += "(";
      print_node(n->lhs.get(), out);
      out += ")";
      return;
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      static constexpr char symbols[] = {'+', '-', '*', '/'};
      out += "(";
      print_node(n->lhs.get(), out);
      out += symbols[static_cast<int>(n->op) - static_cast<int>(Op::Add)];
      print_node(n->rhs.get(), out);
      out += ")";
      return;
    }
    case Op::Pow:
      out += "(";
      print_node(n->lhs.get(), out);
      out += "^" + std::to_string(n->index) + ")";
      return;
  }
}

bool equal_nodes(const ExprNode* a, const ExprNode* b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  switch (a->op) {
    case Op::Num:
      return a->number == b->number;
    case Op::Var:
      return a->index == b->index;
    case Op::Pow:
      return a->index == b->index && equal_nodes(a->lhs.get(), b->lhs.get());
    default:
      return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
  }
}

template <class Visit>
void walk(const ExprNode* n, Visit&& visit) {
  if (!n) return;
  visit(n);
  walk(n->lhs.get(), visit);
  walk(n->rhs.get(), visit);
}

Jet eval_node(const ExprNode* n, std::span<const Jet> z) {
  try {
    switch (n->op) {
      case Op::Num:
        return Jet(z[0].space(), n->number);
      case Op::Var:
        return z[n->index - 1];
      case Op::Neg:
        return -eval_node(n->lhs.get(), z);
      case Op::Conj:
        return conj(eval_node(n->lhs.get(), z));
      case Op::Exp:
        return exp(eval_node(n->lhs.get(), z));
      case Op::Log:
        return log(eval_node(n->lhs.get(), z));
      case Op::Sqrt:
        return sqrt(eval_node(n->lhs.get(), z));
      case Op::Sin:
        return sin(eval_node(n->lhs.get(), z));
      case Op::Cos:
        return cos(eval_node(n->lhs.get(), z));
      case Op::Add:
        return eval_node(n->lhs.get(), z) + eval_node(n->rhs.get(), z);
      case Op::Sub:
        return eval_node(n->lhs.get(), z) - eval_node(n->rhs.get(), z);
      case Op::Mul:
        return eval_node(n->lhs.get(), z) * eval_node(n->rhs.get(), z);
      case Op::Div:
        return eval_node(n->lhs.get(), z) / eval_node(n->rhs.get(), z);
      case Op::Pow:
        return pow(eval_node(n->lhs.get(), z), n->index);
    }
  } catch (const JetError& e) {
    throw EvalError(e.what(), n->offset);
  }
  throw std::logic_error("unknown expression node");
}

cplx value_node(const ExprNode* n, std::span<const cplx> z) {
  auto check_cut = [&](cplx x, const char* what) {
    if (x.imag() == 0.0 && x.real() < 0.0) throw EvalError(std::string(what) + " evaluated on its branch cut", n->offset);
  };
  switch (n->op) {
    case Op::Num:
      return n->number;
    case Op::Var:
      return z[n->index - 1];
    case Op::Neg:
      return -value_node(n->lhs.get(), z);
    case Op::Conj:
      return std::conj(value_node(n->lhs.get(), z));
    case Op::Exp:
      return std::exp(value_node(n->lhs.get(), z));
    case Op::Log: {
      const cplx x = value_node(n->lhs.get(), z);
      if (x == 0.0) throw EvalError("log evaluated on its branch cut", n->offset);
      check_cut(x, "log");
      return std::log(x);
    }
    case Op::Sqrt: {
      const cplx x = value_node(n->lhs.get(), z);
      check_cut(x, "sqrt");
      return std::sqrt(x);
    }
    case Op::Sin:
      return std::sin(value_node(n->lhs.get(), z));
    case Op::Cos:
      return std::cos(value_node(n->lhs.get(), z));
    case Op::Add:
      return value_node(n->lhs.get(), z) + value_node(n->rhs.get(), z);
    case Op::Sub:
      return value_node(n->lhs.get(), z) - value_node(n->rhs.get(), z);
    case Op::Mul:
      return value_node(n->lhs.get(), z) * value_node(n->rhs.get(), z);
    case Op::Div: {
      const cplx den = value_node(n->rhs.get(), z);
      if (den == 0.0) throw EvalError("division by zero", n->offset);
      return value_node(n->lhs.get(), z) / den;
    }
    case Op::Pow: {
      const cplx b = value_node(n->lhs.get(), z);
      if (n->index < 0 && b == 0.0) throw EvalError("division by zero", n->offset);
      cplx r = 1.0;
      for (int k = 0; k < std::abs(n->index); ++k) r *= b;
      return n->index < 0 ? 1.0 / r : r;
    }
  }
  throw std::logic_error("unknown expression node");
}

}  // namespace

Expr Expr::constant(cplx value) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Num;
  n->number = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  n->index = index;
  return Expr(std::move(n));
}

int Expr::max_variable() const {
  int m = 0;
  walk(root(), [&](const ExprNode* n) {
    if (n->op == Op::Var) m = std::max(m, n->index);
  });
  return m;
}

bool Expr::contains_conj() const {
  bool found = false;
  walk(root(), [&](const ExprNode* n) { found = found || n->op == Op::Conj; });
  return found;
}

bool Expr::is_zero_literal() const { return root_ && root_->op == Op::Num && root_->number == 0.0; }

Expr parse_expr(std::string_view text, int dim) { return Expr(Parser(text, dim).run()); }

std::string print_expr(const Expr& e) {
  std::string out;
  if (e.root()) print_node(e.root(), out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) { return equal_nodes(a.root(), b.root()); }

Jet eval_expr(const Expr& e, std::span<const Jet> z) {
  if (z.empty()) throw std::invalid_argument("expression evaluated without coordinates");
  if (e.max_variable() > static_cast<int>(z.size())) throw DomainError("point dimension below expression dimension");
  return eval_node(e.root(), z);
}

Jet2 eval_jet(const Expr& e, const ChartPoint& p, int order) {
  p.validate();
  const auto z = lift_point(p, order);
  return Jet2::from(eval_expr(e, z));
}

cplx eval_value(const Expr& e, std::span<const cplx> z) {
  if (e.max_variable() > static_cast<int>(z.size())) throw DomainError("point dimension below expression dimension");
  return value_node(e.root(), z);
}

}  // namespace hflat

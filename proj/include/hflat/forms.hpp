#pragma once

// Pointwise exterior algebra over a fixed ordered basis of 2n covectors.
//
// Basis slot a < n is the (1,0) covector number a, slot n + a its conjugate.
// The same code serves the coordinate basis (dz, dzbar) and a coframe basis
// (phi, phibar); callers keep track of which one a form is expressed in.
// Multi-indices are bitmasks, so a sorted index list is implicit and the sign
// of every insertion is normalized at construction.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "hflat/jet.hpp"

namespace hflat {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

/// Sign of moving the indices of `b` past those of `a` in the wedge a ^ b.
inline int wedge_sign(Mask a, Mask b) {
  int swaps = 0;
  while (b) {
    const int j = std::countr_zero(b);
    swaps += popcount(a >> (j + 1));
    b &= b - 1;
  }
  return (swaps & 1) ? -1 : 1;
}

template <class S>
class Form {
 public:
  Form() = default;
  Form(int n, int degree, S zero = S{}) : n_(n), degree_(degree), zero_(std::move(zero)) {}

  int dim() const { return n_; }
  int nbasis() const { return 2 * n_; }
  int degree() const { return degree_; }
  const S& zero() const { return zero_; }
  const std::map<Mask, S>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds c to the coefficient of the basis monomial with this mask.
  void add(Mask m, const S& c) {
    if (popcount(m) != degree_) throw std::logic_error("form term of the wrong degree");
    auto it = terms_.find(m);
    if (it == terms_.end()) terms_.emplace(m, c);
    else it->second += c;
  }
  void add_signed(Mask m, int sign, const S& c) {
    if (sign > 0) add(m, c);
    else add(m, -c);
  }

  /// Adds c times the wedge of the listed basis covectors (in the given order).
  void add_monomial(std::initializer_list<int> slots, const S& c) {
    Mask m = 0;
    int sign = 1;
    for (int s : slots) {
      const Mask bit = Mask{1} << s;
      if (m & bit) return;
      sign *= wedge_sign(m, bit);
      m |= bit;
    }
    add_signed(m, sign, c);
  }

  S coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? zero_ : it->second;
  }
  cplx value(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cplx(0.0) : scalar_value(it->second);
  }

  /// Value of the 2-form on the basis vector pair (E_a, E_b).
  cplx pair_value(int a, int b) const {
    if (a == b) return 0.0;
    const Mask m = (Mask{1} << a) | (Mask{1} << b);
    return a < b ? value(m) : -value(m);
  }

  double max_abs() const {
    double r = 0.0;
    for (const auto& [m, c] : terms_) r = std::max(r, std::abs(scalar_value(c)));
    return r;
  }

  Form& operator+=(const Form& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  Form& operator*=(cplx s) {
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, cplx s) { return a *= s; }
  friend Form operator*(cplx s, Form a) { return a *= s; }
  friend Form operator-(Form a) { return a *= cplx(-1.0); }

  /// Function-times-form.
  Form scaled(const S& f) const {
    Form out(n_, degree_, zero_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, f * c);
    return out;
  }

  /// Component of type (p, q): p holomorphic slots, q antiholomorphic.
  Form type_part(int p, int q) const {
    if (p + q != degree_) throw std::invalid_argument("type (p,q) does not match form degree");
    Form out(n_, degree_, zero_);
    const Mask low = (Mask{1} << n_) - 1;
    for (const auto& [m, c] : terms_)
      if (popcount(m & low) == p) out.terms_.emplace(m, c);
    return out;
  }

  void check_compatible(const Form& o) const {
    if (o.n_ != n_) throw std::invalid_argument("form dimension mismatch");
    if (o.degree_ != degree_) throw std::invalid_argument("form degree mismatch");
  }

 private:
  int n_ = 0;
  int degree_ = 0;
  S zero_{};
  std::map<Mask, S> terms_;
};

using FormValue = Form<cplx>;
using JetForm = Form<Jet>;

template <class S>
Form<S> wedge(const Form<S>& a, const Form<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("form dimension mismatch");
  Form<S> out(a.dim(), a.degree() + b.degree(), a.zero());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      out.add_signed(ma | mb, wedge_sign(ma, mb), ca * cb);
    }
  return out;
}

/// Swaps (1,0) and (0,1) slots, conjugates coefficients, and fixes the reordering sign.
template <class S>
Form<S> conj(const Form<S>& a) {
  const int n = a.dim();
  const Mask low = (Mask{1} << n) - 1;
  Form<S> out(n, a.degree(), a.zero());
  for (const auto& [m, c] : a.terms()) {
    const Mask lo = m & low, hi = m >> n;
    // Image order: conj of lo slots land in the high half, hi slots in the low half.
    // The conjugated monomial lists hi-images first after sorting, so the sign is that of
    // moving |hi| indices past |lo| indices.
    const int sign = ((popcount(lo) * popcount(hi)) & 1) ? -1 : 1;
    out.add_signed((lo << n) | hi, sign, conj_scalar(c));
  }
  return out;
}

inline FormValue form_value(const JetForm& f) {
  FormValue out(f.dim(), f.degree());
  for (const auto& [m, c] : f.terms()) out.add(m, c.value());
  return out;
}

inline JetForm truncate(const JetForm& f, int order) {
  JetForm out(f.dim(), f.degree(), f.zero().truncate(order));
  for (const auto& [m, c] : f.terms()) out.add(m, c.truncate(order));
  return out;
}

/// Exterior derivative in the coordinate basis. Coefficient jets drop one order.
/// Throws JetError if the coefficients carry no derivative information.
JetForm exterior_d(const JetForm& f);

/// Re-expresses forms after a change of basis: old slot b = sum_d L(b, d) new slot d.
/// Row wedges are cached per multi-index, so reuse one instance for many forms.
template <class S>
class BasisChange {
 public:
  BasisChange(int n, std::vector<S> rows_major, S zero) : n_(n), L_(std::move(rows_major)), zero_(std::move(zero)) {}

  int dim() const { return n_; }
  const S& entry(int b, int d) const { return L_[static_cast<std::size_t>(b) * 2 * n_ + d]; }

  const Form<S>& monomial(Mask m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    Form<S> acc(n_, 0, zero_);
    {
      S one = zero_;
      one += cplx(1.0);
      acc.add(0, one);
    }
    for (Mask rest = m; rest; rest &= rest - 1) {
      const int b = std::countr_zero(rest);
      Form<S> row(n_, 1, zero_);
      for (int d = 0; d < 2 * n_; ++d)
        if (!exact_zero(entry(b, d))) row.add(Mask{1} << d, entry(b, d));
      acc = wedge(acc, row);
    }
    return cache_.emplace(m, std::move(acc)).first->second;
  }

  Form<S> apply(const Form<S>& f) {
    Form<S> out(n_, f.degree(), zero_);
    for (const auto& [m, c] : f.terms()) {
      const Form<S>& w = monomial(m);
      for (const auto& [mw, cw] : w.terms()) out.add(mw, c * cw);
    }
    return out;
  }

 private:
  int n_;
  std::vector<S> L_;
  S zero_;
  std::map<Mask, Form<S>> cache_;
};

/// Rectangular grid of forms of one degree.
template <class S>
class MatrixOfForms {
 public:
  MatrixOfForms() = default;
  MatrixOfForms(int rows, int cols, const Form<S>& fill) : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Form<S>& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Form<S>& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  int degree() const { return entries_.empty() ? 0 : entries_.front().degree(); }

  double max_abs() const {
    double r = 0.0;
    for (const auto& e : entries_) r = std::max(r, e.max_abs());
    return r;
  }

  MatrixOfForms& operator+=(const MatrixOfForms& o) {
    check_shape(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  MatrixOfForms& operator-=(const MatrixOfForms& o) {
    check_shape(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }
  MatrixOfForms& operator*=(cplx s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }
  friend MatrixOfForms operator+(MatrixOfForms a, const MatrixOfForms& b) { return a += b; }
  friend MatrixOfForms operator-(MatrixOfForms a, const MatrixOfForms& b) { return a -= b; }
  friend MatrixOfForms operator*(cplx s, MatrixOfForms a) { return a *= s; }

  template <class F>
  MatrixOfForms map(F&& f) const {
    MatrixOfForms out;
    out.rows_ = rows_;
    out.cols_ = cols_;
    out.entries_.reserve(entries_.size());
    for (const auto& e : entries_) out.entries_.push_back(f(e));
    return out;
  }

  MatrixOfForms transpose() const {
    MatrixOfForms out;
    out.rows_ = cols_;
    out.cols_ = rows_;
    out.entries_.resize(entries_.size());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  void check_shape(const MatrixOfForms& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("form matrix shape mismatch");
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Form<S>> entries_;
};

/// (A ^ B)_ij = sum_k A_ik ^ B_kj.
template <class S>
MatrixOfForms<S> wedge(const MatrixOfForms<S>& a, const MatrixOfForms<S>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("form matrix shape mismatch");
  const auto& proto = a(0, 0);
  MatrixOfForms<S> out(a.rows(), b.cols(), Form<S>(proto.dim(), a.degree() + b.degree(), proto.zero()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      for (int k = 0; k < a.cols(); ++k) out(i, j) += wedge(a(i, k), b(k, j));
  return out;
}

/// Entrywise conjugate (not the conjugate transpose).
template <class S>
MatrixOfForms<S> conj(const MatrixOfForms<S>& a) {
  return a.map([](const Form<S>& f) { return conj(f); });
}

}  // namespace hflat

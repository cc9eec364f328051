#pragma once

// Exact forward-mode differentiation of smooth complex-valued chart functions.
//
// A Jet is a truncated multivariate Taylor polynomial in the 2n Wirtinger
// variables (z_1..z_n, zbar_1..zbar_n), treated as independent. Storage is
// by Taylor coefficient c_alpha = d^alpha f / alpha!, monomials ordered by
// total degree. Conjugation maps the jet of f to the jet of conj(f): it
// conjugates every coefficient and swaps the z and zbar exponents.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace hflat {

using cplx = std::complex<double>;

inline constexpr int kMaxJetVars = 8;
inline constexpr int kMaxJetOrder = 4;

/// Monomial tables for a fixed (variable count, order). Instances are interned
/// and live for the whole program, so Jets hold raw pointers to them.
class JetSpace {
 public:
  static const JetSpace& get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exps_.size()); }
  /// Number of monomials of total degree <= d (a prefix of the ordering).
  int prefix(int d) const { return degree_end_[d]; }
  const std::vector<std::uint8_t>& exponents(int index) const { return exps_[index]; }
  int index_of(const std::vector<std::uint8_t>& exps) const;

  struct Product {
    std::int32_t lhs, rhs, out;
  };
  std::span<const Product> products() const { return products_; }
  /// Coefficient indices after the z <-> zbar swap.
  std::span<const std::int32_t> conj_perm() const { return conj_perm_; }
  /// derivative_source(a)[k] = index in this space of monomial k (of the order-1 space) + e_a.
  std::span<const std::int32_t> derivative_source(int var) const { return deriv_src_[var]; }

 private:
  JetSpace(int nvars, int order);

  int nvars_;
  int order_;
  std::vector<std::vector<std::uint8_t>> exps_;
  std::vector<int> degree_end_;
  std::vector<Product> products_;
  std::vector<std::int32_t> conj_perm_;
  std::vector<std::vector<std::int32_t>> deriv_src_;
};

class Jet {
 public:
  Jet() = default;
  explicit Jet(const JetSpace& space, cplx value = 0.0);

  const JetSpace& space() const { return *space_; }
  bool valid() const { return space_ != nullptr; }
  int order() const { return space_->order(); }
  int nvars() const { return space_->nvars(); }

  cplx value() const { return c_[0]; }
  std::span<const cplx> coefficients() const { return c_; }
  std::span<cplx> coefficients() { return c_; }
  /// First derivative with respect to Wirtinger variable `var`, as a scalar.
  cplx d1(int var) const;
  /// Second derivative d^2 f / dw_a dw_b, as a scalar.
  cplx d2(int a, int b) const;

  /// d f / dw_var as a jet of one lower order.
  Jet derivative(int var) const;
  Jet truncate(int order) const;
  /// True when every stored coefficient is exactly zero.
  bool is_zero() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(cplx s);
  Jet& operator+=(cplx s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(cplx s) {
    c_[0] -= s;
    return *this;
  }
  /// this += a * b, all in the same space.
  void add_product(const Jet& a, const Jet& b);

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }

 private:
  const JetSpace* space_ = nullptr;
  std::vector<cplx> c_;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator+(Jet a, cplx s) { return a += s; }
inline Jet operator+(cplx s, Jet a) { return a += s; }
inline Jet operator-(Jet a, cplx s) { return a -= s; }
inline Jet operator-(cplx s, Jet a) { return (-std::move(a)) += s; }
inline Jet operator*(Jet a, cplx s) { return a *= s; }
inline Jet operator*(cplx s, Jet a) { return a *= s; }
inline Jet operator*(Jet a, double s) { return a *= cplx(s); }
inline Jet operator*(double s, Jet a) { return a *= cplx(s); }
Jet operator/(const Jet& a, const Jet& b);
Jet operator/(Jet a, cplx s);
Jet operator/(cplx s, const Jet& b);

Jet conj(const Jet& a);
Jet reciprocal(const Jet& a);
Jet exp(const Jet& a);
/// Principal branch; throws JetError on zero or on the negative real axis.
Jet log(const Jet& a);
/// Principal branch; throws JetError on the negative real axis, and at zero for order >= 1.
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, int exponent);

// Uniform access for code templated over plain complex numbers and jets.
inline cplx scalar_value(const cplx& s) { return s; }
inline cplx scalar_value(const Jet& s) { return s.value(); }
inline cplx conj_scalar(const cplx& s) { return std::conj(s); }
inline Jet conj_scalar(const Jet& s) { return conj(s); }
inline bool exact_zero(const cplx& s) { return s == 0.0; }
inline bool exact_zero(const Jet& s) { return s.is_zero(); }

/// Chart coordinates z_1..z_n.
struct ChartPoint {
  std::vector<cplx> coords;

  int dim() const { return static_cast<int>(coords.size()); }
  /// Throws DomainError for empty or non-finite coordinates.
  void validate() const;
};

/// Value plus first and second Wirtinger derivatives. Derivative slots are ordered
/// (d/dz_1..d/dz_n, d/dzbar_1..d/dzbar_n); d2 is row-major (2n)x(2n) and symmetric.
struct Jet2 {
  cplx value;
  std::vector<cplx> d1;
  std::vector<cplx> d2;
  int order = 0;

  cplx hessian(int a, int b) const { return d2[static_cast<std::size_t>(a) * d1.size() + b]; }
  static Jet2 from(const Jet& j);
};

/// Seeded jet of z_index (or zbar_index when `conjugated`) at `point`.
/// `index` is 1-based. Throws std::out_of_range when the index exceeds the dimension.
Jet2 lift_coordinate(const ChartPoint& point, int index, bool conjugated, int order);

/// Jets of z_1..z_n at `point`, seeded in the 2n Wirtinger variables.
std::vector<Jet> lift_point(const ChartPoint& point, int order);

}  // namespace hflat

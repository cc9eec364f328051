#include "hflat/jet.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hflat/errors.hpp"

namespace hflat {

namespace {

void enumerate(int nvars, int degree, int start, std::vector<std::uint8_t>& cur,
               std::vector<std::vector<std::uint8_t>>& out) {
  if (degree == 0) {
    out.push_back(cur);
    return;
  }
  for (int v = start; v < nvars; ++v) {
    ++cur[v];
    enumerate(nvars, degree - 1, v, cur, out);
    --cur[v];
  }
}

std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

const Jet& check_same(const Jet& a, const Jet& b) {
  if (&a.space() != &b.space()) throw std::logic_error("jet arithmetic across different jet spaces");
  return a;
}

// Composition f(x0 + h) = sum_k coeffs[k] h^k with h the non-constant part of a.
Jet compose(const Jet& a, const std::array<cplx, kMaxJetOrder + 1>& coeffs) {
  const int order = a.order();
  Jet h = a;
  h.coefficients()[0] = 0.0;
  Jet result(a.space(), coeffs[order]);
  for (int k = order - 1; k >= 0; --k) {
    result = result * h;
    result += coeffs[k];
  }
  return result;
}

}  // namespace

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
  std::vector<std::uint8_t> cur(nvars, 0);
  degree_end_.assign(order + 1, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate(nvars, d, 0, cur, exps_);
    degree_end_[d] = static_cast<int>(exps_.size());
  }

  std::map<std::vector<std::uint8_t>, int> index;
  for (int k = 0; k < size(); ++k) index.emplace(exps_[k], k);

  std::vector<std::uint8_t> sum(nvars);
  for (int i = 0; i < size(); ++i) {
    int di = 0;
    for (auto e : exps_[i]) di += e;
    for (int j = 0; j < prefix(order - di); ++j) {
      for (int v = 0; v < nvars; ++v) sum[v] = exps_[i][v] + exps_[j][v];
      products_.push_back({i, j, index.at(sum)});
    }
  }

  const int half = nvars / 2;
  conj_perm_.resize(size());
  for (int k = 0; k < size(); ++k) {
    std::vector<std::uint8_t> swapped(nvars);
    for (int v = 0; v < nvars; ++v) swapped[v] = exps_[k][v < half ? v + half : v - half];
    conj_perm_[k] = index.at(swapped);
  }

  if (order > 0) {
    deriv_src_.resize(nvars);
    for (int v = 0; v < nvars; ++v) {
      for (int k = 0; k < prefix(order - 1); ++k) {
        auto e = exps_[k];
        ++e[v];
        deriv_src_[v].push_back(index.at(e));
      }
    }
  }
}

const JetSpace& JetSpace::get(int nvars, int order) {
  if (nvars < 1 || nvars > kMaxJetVars || order < 0 || order > kMaxJetOrder)
    throw std::invalid_argument("unsupported jet space");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot.reset(new JetSpace(nvars, order));
  return *slot;
}

int JetSpace::index_of(const std::vector<std::uint8_t>& exps) const {
  for (int k = 0; k < size(); ++k)
    if (exps_[k] == exps) return k;
  return -1;
}

Jet::Jet(const JetSpace& space, cplx value) : space_(&space), c_(space.size(), cplx(0.0)) { c_[0] = value; }

cplx Jet::d1(int var) const { return order() >= 1 ? c_[1 + var] : cplx(0.0); }

cplx Jet::d2(int a, int b) const {
  if (order() < 2) return 0.0;
  std::vector<std::uint8_t> e(nvars(), 0);
  ++e[a];
  ++e[b];
  const int k = space_->index_of(e);
  return a == b ? 2.0 * c_[k] : c_[k];
}

Jet Jet::derivative(int var) const {
  if (order() < 1) throw std::logic_error("derivative of an order-0 jet");
  Jet out(JetSpace::get(nvars(), order() - 1));
  const auto src = space_->derivative_source(var);
  for (std::size_t k = 0; k < src.size(); ++k) {
    const auto& e = space_->exponents(src[k]);
    out.c_[k] = static_cast<double>(e[var]) * c_[src[k]];
  }
  return out;
}

Jet Jet::truncate(int order) const {
  if (order == this->order()) return *this;
  if (order > this->order()) throw std::logic_error("cannot raise jet order");
  Jet out(JetSpace::get(nvars(), order));
  std::copy_n(c_.begin(), out.c_.size(), out.c_.begin());
  return out;
}

bool Jet::is_zero() const {
  for (const auto& x : c_)
    if (x != 0.0) return false;
  return true;
}

Jet& Jet::operator+=(const Jet& o) {
  check_same(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_same(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  for (auto& x : c_) x *= s;
  return *this;
}

void Jet::add_product(const Jet& a, const Jet& b) {
  check_same(a, b);
  check_same(*this, a);
  for (const auto& p : space_->products()) c_[p.out] += a.c_[p.lhs] * b.c_[p.rhs];
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.space());
  out.add_product(a, b);
  return out;
}

Jet reciprocal(const Jet& a) {
  const cplx x0 = a.value();
  if (x0 == 0.0) throw JetError("division by zero");
  std::array<cplx, kMaxJetOrder + 1> c{};
  cplx inv = 1.0 / x0;
  cplx p = inv;
  for (int k = 0; k <= a.order(); ++k) {
    c[k] = (k % 2 == 0 ? p : -p);
    p *= inv;
  }
  return compose(a, c);
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.value() == 0.0) throw JetError("division by zero");
  return a * reciprocal(b);
}

Jet operator/(Jet a, cplx s) {
  if (s == 0.0) throw JetError("division by zero");
  return a *= 1.0 / s;
}

Jet operator/(cplx s, const Jet& b) { return reciprocal(b) * s; }

Jet conj(const Jet& a) {
  Jet out(a.space());
  const auto perm = a.space().conj_perm();
  const auto src = a.coefficients();
  auto dst = out.coefficients();
  for (std::size_t k = 0; k < src.size(); ++k) dst[perm[k]] = std::conj(src[k]);
  return out;
}

Jet exp(const Jet& a) {
  std::array<cplx, kMaxJetOrder + 1> c{};
  const cplx e = std::exp(a.value());
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    c[k] = e / fact;
  }
  return compose(a, c);
}

Jet log(const Jet& a) {
  const cplx x0 = a.value();
  if (x0 == 0.0 || (x0.imag() == 0.0 && x0.real() < 0.0))
    throw JetError("log evaluated on its branch cut at " + describe(x0));
  std::array<cplx, kMaxJetOrder + 1> c{};
  c[0] = std::log(x0);
  cplx p = 1.0 / x0;
  for (int k = 1; k <= a.order(); ++k) {
    c[k] = (k % 2 == 1 ? p : -p) / static_cast<double>(k);
    p /= x0;
  }
  return compose(a, c);
}

Jet sqrt(const Jet& a) {
  const cplx x0 = a.value();
  if (x0.imag() == 0.0 && x0.real() < 0.0)
    throw JetError("sqrt evaluated on its branch cut at " + describe(x0));
  if (x0 == 0.0 && a.order() > 0) throw JetError("sqrt is not differentiable at 0");
  std::array<cplx, kMaxJetOrder + 1> c{};
  const cplx s = std::sqrt(x0);
  c[0] = s;
  // c_k = binom(1/2, k) x0^(1/2 - k)
  double binom = 1.0;
  cplx p = s;
  for (int k = 1; k <= a.order(); ++k) {
    binom *= (0.5 - (k - 1)) / k;
    p /= x0;
    c[k] = binom * p;
  }
  return compose(a, c);
}

Jet sin(const Jet& a) {
  std::array<cplx, kMaxJetOrder + 1> c{};
  const cplx s = std::sin(a.value()), co = std::cos(a.value());
  const cplx cyc[4] = {s, co, -s, -co};
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    c[k] = cyc[k % 4] / fact;
  }
  return compose(a, c);
}

Jet cos(const Jet& a) {
  std::array<cplx, kMaxJetOrder + 1> c{};
  const cplx s = std::sin(a.value()), co = std::cos(a.value());
  const cplx cyc[4] = {co, -s, -co, s};
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    c[k] = cyc[k % 4] / fact;
  }
  return compose(a, c);
}

Jet pow(const Jet& a, int exponent) {
  if (exponent < 0) return reciprocal(pow(a, -exponent));
  Jet result(a.space(), 1.0);
  Jet base = a;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

void ChartPoint::validate() const {
  if (coords.empty()) throw DomainError("chart point has no coordinates");
  for (const auto& z : coords)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("chart point has a non-finite coordinate");
}

Jet2 Jet2::from(const Jet& j) {
  Jet2 out;
  const int nv = j.nvars();
  out.order = j.order();
  out.value = j.value();
  out.d1.assign(nv, 0.0);
  out.d2.assign(static_cast<std::size_t>(nv) * nv, 0.0);
  if (j.order() >= 1)
    for (int a = 0; a < nv; ++a) out.d1[a] = j.d1(a);
  if (j.order() >= 2) {
    for (int a = 0; a < nv; ++a)
      for (int b = a; b < nv; ++b) {
        const cplx v = j.d2(a, b);
        out.d2[static_cast<std::size_t>(a) * nv + b] = v;
        out.d2[static_cast<std::size_t>(b) * nv + a] = v;
      }
  }
  return out;
}

std::vector<Jet> lift_point(const ChartPoint& point, int order) {
  const int n = point.dim();
  const auto& space = JetSpace::get(2 * n, order);
  std::vector<Jet> z;
  z.reserve(n);
  for (int i = 0; i < n; ++i) {
    Jet v(space, point.coords[i]);
    if (order >= 1) v.coefficients()[1 + i] = 1.0;
    z.push_back(std::move(v));
  }
  return z;
}

Jet2 lift_coordinate(const ChartPoint& point, int index, bool conjugated, int order) {
  if (index < 1 || index > point.dim()) throw std::out_of_range("coordinate index out of range");
  const auto z = lift_point(point, order);
  const Jet& v = z[index - 1];
  return Jet2::from(conjugated ? conj(v) : v);
}

}  // namespace hflat

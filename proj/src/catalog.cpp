#include "hflat/catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hflat/errors.hpp"
#include "hflat/linalg.hpp"

namespace hflat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t idx(int i, int j, int cols) { return static_cast<std::size_t>(i) * cols + j; }

ChartPoint values_point(std::span<const Jet> z) {
  ChartPoint p;
  for (const auto& x : z) p.coords.push_back(x.value());
  return p;
}

/// Uniform direction in C^dim with |z| uniform in [lo, hi).
ChartPoint sample_shell(SplitMix64& rng, int dim, double lo, double hi) {
  std::vector<double> g(2 * dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (int k = 0; k < dim; ++k) {
      // Box-Muller, both outputs.
      const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
      const double rr = std::sqrt(-2.0 * std::log(u1));
      g[2 * k] = rr * std::cos(kTwoPi * u2);
      g[2 * k + 1] = rr * std::sin(kTwoPi * u2);
    }
    for (double x : g) norm += x * x;
  } while (norm < 1e-12);
  const double r = rng.uniform(lo, hi) / std::sqrt(norm);
  ChartPoint p;
  for (int k = 0; k < dim; ++k) p.coords.emplace_back(r * g[2 * k], r * g[2 * k + 1]);
  return p;
}

double norm2(const ChartPoint& p) {
  double s = 0.0;
  for (const auto& c : p.coords) s += std::norm(c);
  return s;
}

bool finite_point(const ChartPoint& p) {
  for (const auto& c : p.coords)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

/// Jets of z one order higher than the given ones, so that holomorphic derivatives
/// of expressions keep the caller's order.
std::vector<Jet> lift_higher(std::span<const Jet> z) {
  return lift_point(values_point(z), z.front().order() + 1);
}

/// Value jet (truncated to order m) and the holomorphic partials (order m) of an expression.
struct ExprJets {
  Jet value;
  std::vector<Jet> partial;
};

ExprJets expr_jets(const Expr& e, std::span<const Jet> zhi, int m, int n) {
  const Jet v = eval_expr(e, zhi);
  ExprJets out{v.truncate(m), {}};
  for (int k = 0; k < n; ++k) out.partial.push_back(v.derivative(k));
  return out;
}

std::vector<cplx> torsion_array(int n) { return std::vector<cplx>(static_cast<std::size_t>(n) * n * n, 0.0); }

void set_T(std::vector<cplx>& T, int n, int k, int i, int j, cplx v) {
  T[(static_cast<std::size_t>(k) * n + i) * n + j] = v;
  T[(static_cast<std::size_t>(k) * n + j) * n + i] = -v;
}

bool evaluates(const CoframeField& f, const ChartPoint& p) {
  try {
    const auto c = f.coefficients(lift_point(p, 0));
    for (const auto& x : c)
      if (!std::isfinite(x.value().real()) || !std::isfinite(x.value().imag())) return false;
    return true;
  } catch (const Error&) {
    return false;
  }
}

void require_holomorphic(const Expr& e, const std::string& what) {
  if (e.empty()) throw std::invalid_argument(what + " is empty");
  if (e.contains_conj()) throw std::invalid_argument(what + " must be holomorphic (no conj)");
  if (e.max_variable() > 2) throw std::invalid_argument(what + " uses a variable beyond z2");
}

}  // namespace

ChartPoint sample_polydisc(SplitMix64& rng, int dim, double radius) {
  ChartPoint p;
  for (int i = 0; i < dim; ++i) {
    const double r = radius * std::sqrt(rng.uniform());
    p.coords.push_back(std::polar(r, kTwoPi * rng.uniform()));
  }
  return p;
}

PointGeometry HermitianModel::geometry(const ChartPoint& p, int order) const {
  if (p.dim() != dim)
    throw DomainError("point has dimension " + std::to_string(p.dim()) + ", model " + name + " has " +
                      std::to_string(dim));
  if (!finite_point(p) || (in_domain && !in_domain(p))) throw DomainError("point outside the domain of " + name);
  return PointGeometry(coframe, p, order);
}

HermitianModel euclidean(int dim) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("euclidean dimension must be 1..4");
  HermitianModel m;
  m.name = "euclidean:dim=" + std::to_string(dim);
  m.dim = dim;
  m.coframe = {dim, [dim](std::span<const Jet> z) {
                 std::vector<Jet> c(static_cast<std::size_t>(dim) * 2 * dim, Jet(z.front().space()));
                 for (int i = 0; i < dim; ++i) c[idx(i, i, 2 * dim)] += cplx(1.0);
                 return c;
               }};
  m.flags = {true, true, true, true};
  m.in_domain = [](const ChartPoint&) { return true; };
  m.sample = [dim](SplitMix64& rng) { return sample_polydisc(rng, dim, 1.0); };
  m.reference_torsion = [dim](const ChartPoint&) { return torsion_array(dim); };
  m.reference_chern_torsion_norm = [](const ChartPoint&) { return 0.0; };
  return m;
}

HermitianModel hopf_surface(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("hopf parameter c must be positive");
  HermitianModel m;
  std::ostringstream nm;
  nm << "hopf";
  if (c != 1.0) nm << ":c=" << c;
  m.name = nm.str();
  m.dim = 2;
  const double sc = std::sqrt(c);
  m.coframe = {2, [sc](std::span<const Jet> z) {
                 const Jet r2 = z[0] * conj(z[0]) + z[1] * conj(z[1]);
                 const Jet s = sc / sqrt(r2);
                 const Jet zero(z.front().space());
                 return std::vector<Jet>{s, zero, zero, zero, zero, s, zero, zero};
               }};
  m.flags.bismut_flat = true;
  m.in_domain = [](const ChartPoint& p) { return norm2(p) > 0.0; };
  m.sample = [](SplitMix64& rng) { return sample_shell(rng, 2, 0.5, 2.0); };
  m.reference_torsion = [sc](const ChartPoint& p) {
    const double r = std::sqrt(norm2(p));
    auto T = torsion_array(2);
    set_T(T, 2, 0, 0, 1, std::conj(p.coords[1]) / (2.0 * sc * r));
    set_T(T, 2, 1, 0, 1, -std::conj(p.coords[0]) / (2.0 * sc * r));
    return T;
  };
  m.reference_chern_torsion_norm = [c](const ChartPoint&) { return 4.0 / c; };
  return m;
}

HermitianModel boothby(const Expr& f, const Expr& h, std::string f_text, std::string h_text) {
  require_holomorphic(f, "boothby f");
  require_holomorphic(h, "boothby h");
  HermitianModel m;
  m.name = "boothby:f=" + f_text + ",h=" + h_text;
  m.dim = 2;
  m.coframe = {2, [f, h](std::span<const Jet> z) {
                 const Jet zero(z.front().space());
                 const Jet ef = exp(eval_expr(f, z)), eh = exp(eval_expr(h, z));
                 return std::vector<Jet>{ef, zero, zero, zero, zero, eh, zero, zero};
               }};
  m.flags.chern_flat = true;
  {
    // Kahler iff df/dz2 = dh/dz1 = 0; decided at a few seeded points.
    SplitMix64 rng(0x600b);
    bool kahler = true;
    for (int s = 0; s < 8 && kahler; ++s) {
      const ChartPoint p = sample_polydisc(rng, 2, 1.0);
      try {
        const Jet2 jf = eval_jet(f, p, 1), jh = eval_jet(h, p, 1);
        if (std::abs(jf.d1[1]) > 1e-12 || std::abs(jh.d1[0]) > 1e-12) kahler = false;
      } catch (const Error&) {
      }
    }
    m.flags.kahler = kahler;
  }
  m.in_domain = [cf = m.coframe](const ChartPoint& p) { return evaluates(cf, p); };
  m.sample = [](SplitMix64& rng) { return sample_polydisc(rng, 2, 1.0); };
  m.reference_torsion = [f, h](const ChartPoint& p) {
    const Jet2 jf = eval_jet(f, p, 1), jh = eval_jet(h, p, 1);
    auto T = torsion_array(2);
    set_T(T, 2, 0, 0, 1, -0.5 * jf.d1[1] * std::exp(-jh.value));
    set_T(T, 2, 1, 0, 1, 0.5 * jh.d1[0] * std::exp(-jf.value));
    return T;
  };
  m.reference_chern_torsion_norm = [ref = m.reference_torsion](const ChartPoint& p) {
    double s = 0.0;
    for (const auto& t : ref(p)) s += std::norm(t);
    return 8.0 * s;
  };
  return m;
}

HermitianModel complete_chern_flat() {
  HermitianModel m;
  m.name = "complete-chern-flat";
  m.dim = 2;
  m.coframe = {2, [](std::span<const Jet> z) {
                 const Jet zero(z.front().space());
                 Jet one = zero;
                 one += cplx(1.0);
                 return std::vector<Jet>{one, zero, zero, zero, -2.0 * z[0] * z[1], one, zero, zero};
               }};
  m.flags.chern_flat = true;
  m.in_domain = [](const ChartPoint&) { return true; };
  m.sample = [](SplitMix64& rng) { return sample_polydisc(rng, 2, 2.0); };
  m.reference_torsion = [](const ChartPoint& p) {
    auto T = torsion_array(2);
    set_T(T, 2, 1, 0, 1, p.coords[0]);
    return T;
  };
  m.reference_chern_torsion_norm = [](const ChartPoint& p) { return 16.0 * std::norm(p.coords[0]); };
  return m;
}

HermitianModel riemann_flat_triple(const Expr& u, const Expr& v, const Expr& f, double scale, std::string label) {
  require_holomorphic(u, "triple u");
  require_holomorphic(v, "triple v");
  require_holomorphic(f, "triple f");
  if (!(scale > 0.0)) throw std::invalid_argument("triple scale must be positive");
  HermitianModel m;
  m.name = std::move(label);
  m.dim = 2;
  m.coframe = {2, [u, v, f, scale](std::span<const Jet> z) {
                 const int K = z.front().order();
                 const auto zhi = lift_higher(z);
                 const ExprJets U = expr_jets(u, zhi, K, 2), V = expr_jets(v, zhi, K, 2), F = expr_jets(f, zhi, K, 2);
                 const Jet lambda = 1.0 + F.value * conj(F.value);
                 const Jet s = (scale / std::sqrt(2.0)) / sqrt(lambda);
                 const Jet s3 = s / lambda;
                 const Jet a = s3 * (cplx(0, 1) * conj(V.value) - U.value * conj(F.value));
                 const Jet b = -(s3 * (cplx(0, 1) * conj(U.value) + V.value * conj(F.value)));
                 const Jet zero(z.front().space());
                 std::vector<Jet> c(8, zero);
                 for (int k = 0; k < 2; ++k) {
                   c[idx(0, k, 4)] = s * U.partial[k] + a * F.partial[k];
                   c[idx(1, k, 4)] = s * V.partial[k] + b * F.partial[k];
                 }
                 return c;
               }};
  m.flags.riemann_flat = true;
  m.in_domain = [cf = m.coframe](const ChartPoint& p) {
    try {
      const auto c = cf.coefficients(lift_point(p, 0));
      const cplx det = c[0].value() * c[5].value() - c[1].value() * c[4].value();
      return std::isfinite(std::abs(det)) && std::abs(det) > 1e-10;
    } catch (const Error&) {
      return false;
    }
  };
  m.sample = [](SplitMix64& rng) { return sample_polydisc(rng, 2, 1.0); };
  m.reference_riemannian = [f](const ChartPoint& p) {
    const Jet2 jf = eval_jet(f, p, 1);
    const cplx fv = jf.value;
    const double lambda = 1.0 + std::norm(fv);
    RiemannianReference r{FormValue(2, 1), FormValue(2, 1)};
    for (int k = 0; k < 2; ++k) {
      const cplx df = jf.d1[k];
      // alpha = (f dfbar - fbar df) / (2 lambda), beta = -i df / lambda
      r.alpha.add(Mask{1} << (2 + k), fv * std::conj(df) / (2.0 * lambda));
      r.alpha.add(Mask{1} << k, -std::conj(fv) * df / (2.0 * lambda));
      r.beta.add(Mask{1} << k, cplx(0, -1) * df / lambda);
    }
    return r;
  };
  return m;
}

HermitianModel triple_g1() {
  HermitianModel m = riemann_flat_triple(parse_expr("z1", 2), parse_expr("0", 2), parse_expr("z2", 2),
                                         std::sqrt(2.0), "g1");
  m.sample = [](SplitMix64& rng) {
    ChartPoint p = sample_shell(rng, 1, 0.3, 1.5);
    p.coords.push_back(sample_polydisc(rng, 1, 1.5).coords[0]);
    return p;
  };
  return m;
}

HermitianModel triple_g2() {
  HermitianModel m = riemann_flat_triple(parse_expr("z1", 2), parse_expr("z2", 2), parse_expr("i*z1*z2", 2),
                                         std::sqrt(2.0), "g2");
  m.sample = [](SplitMix64& rng) {
    ChartPoint p = sample_polydisc(rng, 1, 1.5);
    p.coords.push_back(sample_shell(rng, 1, 0.0, 0.8).coords[0]);
    return p;
  };
  return m;
}

namespace {

/// Coframe of a Hermitian metric field g_{i jbar}: phi = U dz with U upper triangular and U^* U = g^t.
CoframeFn cholesky_coframe(int n, std::function<std::vector<Jet>(std::span<const Jet>)> metric) {
  return [n, metric = std::move(metric)](std::span<const Jet> z) {
    const auto g = metric(z);
    std::vector<Jet> gt(g.size(), Jet(z.front().space()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gt[idx(i, j, n)] = g[idx(j, i, n)];
    const auto U = cholesky_upper(gt, n);
    std::vector<Jet> c(static_cast<std::size_t>(n) * 2 * n, Jet(z.front().space()));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) c[idx(k, i, 2 * n)] = U[idx(k, i, n)];
    return c;
  };
}

}  // namespace

HermitianModel perturbed_metric(std::uint64_t seed, double epsilon, int dim) {
  if (!(epsilon >= 0.0 && epsilon < 0.2)) throw std::invalid_argument("perturbed metric needs 0 <= eps < 0.2");
  if (dim < 1 || dim > 4) throw std::invalid_argument("perturbed metric dimension must be 1..4");
  // Monomials z^a zbar^b of total degree <= 2 in 2n variables.
  const int nb = 2 * dim;
  std::vector<std::vector<int>> monos{{}};
  for (int a = 0; a < nb; ++a) monos.push_back({a});
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) monos.push_back({a, b});
  // Coefficients of A_ij sum to 1/dim in absolute value, so on the unit polydisc every entry of
  // H = (A + A^*) / 2 is at most 1/dim, ||H|| <= 1, and I + eps H >= 0.8.
  SplitMix64 rng(seed);
  const std::size_t nm = monos.size();
  std::vector<cplx> A(static_cast<std::size_t>(dim) * dim * nm);
  for (auto& a : A) a = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q < nm; ++q) s += std::abs(A[idx(i, j, dim) * nm + q]);
      for (std::size_t q = 0; q < nm; ++q) A[idx(i, j, dim) * nm + q] /= s * dim;
    }
  auto metric = [dim, epsilon, monos, A, nm](std::span<const Jet> z) {
    std::vector<Jet> w;
    for (int k = 0; k < dim; ++k) w.push_back(z[k]);
    for (int k = 0; k < dim; ++k) w.push_back(conj(z[k]));
    std::vector<Jet> mono;
    for (const auto& mo : monos) {
      Jet x(z.front().space(), 1.0);
      for (int v : mo) x = x * w[v];
      mono.push_back(std::move(x));
    }
    std::vector<Jet> a(static_cast<std::size_t>(dim) * dim, Jet(z.front().space()));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (std::size_t q = 0; q < nm; ++q) a[idx(i, j, dim)] += mono[q] * A[idx(i, j, dim) * nm + q];
    std::vector<Jet> g(a.size(), Jet(z.front().space()));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        g[idx(i, j, dim)] = (epsilon / 2.0) * (a[idx(i, j, dim)] + conj(a[idx(j, i, dim)]));
        if (i == j) g[idx(i, j, dim)] += cplx(1.0);
      }
    return g;
  };
  HermitianModel m;
  std::ostringstream nmstr;
  nmstr << "perturbed:seed=" << seed << ",eps=" << epsilon << ",dim=" << dim;
  m.name = nmstr.str();
  m.dim = dim;
  m.coframe = {dim, cholesky_coframe(dim, metric)};
  m.flags.kahler = epsilon == 0.0;
  m.flags.chern_flat = m.flags.riemann_flat = m.flags.bismut_flat = epsilon == 0.0;
  m.in_domain = [dim](const ChartPoint& p) {
    for (int k = 0; k < dim; ++k)
      if (std::abs(p.coords[k]) >= 1.0) return false;
    return true;
  };
  m.sample = [dim](SplitMix64& rng) { return sample_polydisc(rng, dim, 1.0); };
  return m;
}

HermitianModel metric_model(std::string name, int dim, std::vector<Expr> g_entries) {
  if (static_cast<int>(g_entries.size()) != dim * dim) throw std::invalid_argument("metric needs dim*dim entries");
  auto metric = [g_entries](std::span<const Jet> z) {
    std::vector<Jet> g;
    for (const auto& e : g_entries) g.push_back(eval_expr(e, z));
    return g;
  };
  HermitianModel m;
  m.name = std::move(name);
  m.dim = dim;
  m.coframe = {dim, cholesky_coframe(dim, metric)};
  m.in_domain = [cf = m.coframe](const ChartPoint& p) { return evaluates(cf, p); };
  m.sample = [dim](SplitMix64& rng) { return sample_polydisc(rng, dim, 1.0); };
  return m;
}

HermitianModel product(const HermitianModel& a, const HermitianModel& b) {
  const int na = a.dim, nbb = b.dim, n = na + nbb;
  if (2 * n > kMaxJetVars)
    throw std::invalid_argument("product " + a.name + ";" + b.name + " has dimension " + std::to_string(n) +
                                ", the jet engine supports at most " + std::to_string(kMaxJetVars / 2));
  HermitianModel m;
  m.name = a.name + ";" + b.name;
  m.dim = n;
  m.coframe = {n, [na, nbb, n, fa = a.coframe.coefficients, fb = b.coframe.coefficients](std::span<const Jet> z) {
                 const auto ca = fa(z.subspan(0, na));
                 const auto cb = fb(z.subspan(na, nbb));
                 std::vector<Jet> c(static_cast<std::size_t>(n) * 2 * n, Jet(z.front().space()));
                 for (int i = 0; i < na; ++i)
                   for (int w = 0; w < 2 * na; ++w)
                     c[idx(i, w < na ? w : n + (w - na), 2 * n)] = ca[idx(i, w, 2 * na)];
                 for (int i = 0; i < nbb; ++i)
                   for (int w = 0; w < 2 * nbb; ++w)
                     c[idx(na + i, w < nbb ? na + w : n + na + (w - nbb), 2 * n)] = cb[idx(i, w, 2 * nbb)];
                 return c;
               }};
  m.flags = {a.flags.chern_flat && b.flags.chern_flat, a.flags.riemann_flat && b.flags.riemann_flat,
             a.flags.bismut_flat && b.flags.bismut_flat, a.flags.kahler && b.flags.kahler};
  m.holomorphic_chart = a.holomorphic_chart && b.holomorphic_chart;
  auto split = [na, nbb](const ChartPoint& p) {
    ChartPoint pa, pb;
    pa.coords.assign(p.coords.begin(), p.coords.begin() + na);
    pb.coords.assign(p.coords.begin() + na, p.coords.begin() + na + nbb);
    return std::pair{pa, pb};
  };
  m.in_domain = [split, da = a.in_domain, db = b.in_domain](const ChartPoint& p) {
    const auto [pa, pb] = split(p);
    return (!da || da(pa)) && (!db || db(pb));
  };
  m.sample = [sa = a.sample, sb = b.sample](SplitMix64& rng) {
    ChartPoint p = sa(rng);
    const ChartPoint q = sb(rng);
    p.coords.insert(p.coords.end(), q.coords.begin(), q.coords.end());
    return p;
  };
  if (a.reference_torsion && b.reference_torsion)
    m.reference_torsion = [split, na, nbb, n, ta = a.reference_torsion, tb = b.reference_torsion](const ChartPoint& p) {
      const auto [pa, pb] = split(p);
      const auto A = ta(pa), B = tb(pb);
      auto T = torsion_array(n);
      for (int k = 0; k < na; ++k)
        for (int i = 0; i < na; ++i)
          for (int j = 0; j < na; ++j) T[(static_cast<std::size_t>(k) * n + i) * n + j] = A[(idx(k, i, na)) * na + j];
      for (int k = 0; k < nbb; ++k)
        for (int i = 0; i < nbb; ++i)
          for (int j = 0; j < nbb; ++j)
            T[(static_cast<std::size_t>(na + k) * n + na + i) * n + na + j] = B[(idx(k, i, nbb)) * nbb + j];
      return T;
    };
  if (a.reference_chern_torsion_norm && b.reference_chern_torsion_norm)
    m.reference_chern_torsion_norm = [split, ta = a.reference_chern_torsion_norm,
                                      tb = b.reference_chern_torsion_norm](const ChartPoint& p) {
      const auto [pa, pb] = split(p);
      return ta(pa) + tb(pb);
    };
  return m;
}

std::vector<double> twistor_matrix(cplx z) {
  const double x = z.real(), y = z.imag(), r2 = std::norm(z);
  const double a = 2.0 * x / (r2 + 1.0), b = 2.0 * y / (r2 + 1.0), c = (r2 - 1.0) / (r2 + 1.0);
  // [[aE, bE - cI], [bE + cI, -aE]] with E = [[0, 1], [-1, 0]].
  const double E[2][2] = {{0, 1}, {-1, 0}};
  std::vector<double> J(16, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double I = i == j ? 1.0 : 0.0;
      J[idx(i, j, 4)] = a * E[i][j];
      J[idx(i, 2 + j, 4)] = b * E[i][j] - c * I;
      J[idx(2 + i, j, 4)] = b * E[i][j] + c * I;
      J[idx(2 + i, 2 + j, 4)] = -a * E[i][j];
    }
  return J;
}

std::string random_holomorphic_polynomial(SplitMix64& rng, int dim, int degree, double scale) {
  // Exponent vectors of total degree <= degree.
  std::vector<std::vector<int>> exps{{}};
  exps.front().assign(dim, 0);
  for (int d = 1; d <= degree; ++d) {
    std::vector<std::vector<int>> next;
    for (const auto& e : exps) {
      int total = 0;
      for (int x : e) total += x;
      if (total != d - 1) continue;
      int last = dim - 1;
      while (last >= 0 && e[last] == 0) --last;
      for (int k = std::max(last, 0); k < dim; ++k) {
        auto f = e;
        ++f[k];
        next.push_back(std::move(f));
      }
    }
    exps.insert(exps.end(), next.begin(), next.end());
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& e : exps) {
    const int p = static_cast<int>(rng.next() % 5) - 2, q = static_cast<int>(rng.next() % 5) - 2;
    if (p == 0 && q == 0) continue;
    if (!first) out << " + ";
    first = false;
    out << "(" << scale * p / 4.0 << (q < 0 ? "-" : "+") << std::abs(scale * q / 4.0) << "i)";
    for (int k = 0; k < dim; ++k)
      if (e[k] > 0) {
        out << "*z" << (k + 1);
        if (e[k] > 1) out << "^" << e[k];
      }
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace hflat

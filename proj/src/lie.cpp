#include "hflat/lie.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hflat/errors.hpp"
#include "hflat/forms.hpp"
#include "hflat/linalg.hpp"

namespace hflat {

namespace {

using CVec = std::vector<cplx>;

CVec basis_vector(int m, int i) {
  CVec v(m, 0.0);
  v[i] = 1.0;
  return v;
}

CVec real_vector(const std::vector<double>& v) { return CVec(v.begin(), v.end()); }

double norm(const CVec& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

CVec operator-(CVec a, const CVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

CVec operator*(cplx s, CVec a) {
  for (auto& x : a) x *= s;
  return a;
}

CVec conj(CVec a) {
  for (auto& x : a) x = std::conj(x);
  return a;
}

void set_bracket(LieAlgebra& a, int i, int j, int k, double v) {
  const int m = a.dim;
  a.c[(static_cast<std::size_t>(k) * m + i) * m + j] += v;
  a.c[(static_cast<std::size_t>(k) * m + j) * m + i] -= v;
}

/// Orthonormal sum of su(2) factors (X, Y, Z with [X,Y] = 2Z and cyclic) and an abelian block.
LieAlgebra build(std::string name, int su2_factors, int abelian) {
  LieAlgebra a;
  a.name = std::move(name);
  a.dim = 3 * su2_factors + abelian;
  const int m = a.dim;
  a.c.assign(static_cast<std::size_t>(m) * m * m, 0.0);
  a.g.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) a.g[static_cast<std::size_t>(i) * m + i] = 1.0;
  a.bi_invariant = true;
  RootDatum d;
  for (int f = 0; f < su2_factors; ++f) {
    const std::string suffix = f == 0 ? "" : std::to_string(f);
    for (const char* l : {"X", "Y", "Z"}) a.labels.push_back(l + suffix);
    const int x = 3 * f, y = x + 1, z = x + 2;
    set_bracket(a, x, y, z, 2.0);
    set_bracket(a, y, z, x, 2.0);
    set_bracket(a, z, x, y, 2.0);
  }
  for (int w = 0; w < abelian; ++w) a.labels.push_back(abelian == 1 ? "W" : "W" + std::to_string(w + 1));
  const int r = su2_factors + abelian;
  for (int f = 0; f < su2_factors; ++f) {
    std::vector<double> h(m, 0.0);
    h[3 * f] = 1.0;
    d.torus.push_back(h);
    std::vector<double> alpha(r, 0.0);
    alpha[f] = 2.0;
    d.roots.push_back(alpha);
    CVec e(m, 0.0);
    e[3 * f + 1] = 1.0;
    e[3 * f + 2] = cplx(0.0, -1.0);
    d.root_vectors.push_back(e);
  }
  for (int w = 0; w < abelian; ++w) {
    std::vector<double> h(m, 0.0);
    h[3 * su2_factors + w] = 1.0;
    d.torus.push_back(h);
  }
  a.root_datum = d;
  return a;
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double sign) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - sign * b[i]) > 1e-12) return false;
  return true;
}

std::map<std::string, std::string> parse_params(const std::string& s) {
  std::map<std::string, std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value in '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("bad number for " + what + ": '" + s + "'");
  return v;
}

/// Torus complex structure as a matrix over r torus elements from pairs (from -> to), J(from) = to.
std::vector<double> torus_pairs(int r, std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<double> J(static_cast<std::size_t>(r) * r, 0.0);
  for (auto [from, to] : pairs) {
    J[static_cast<std::size_t>(to) * r + from] = 1.0;
    J[static_cast<std::size_t>(from) * r + to] = -1.0;
  }
  return J;
}

int factorial_overflow_guard(int K) {
  if (K < 0 || K > 60) throw std::invalid_argument("truncation order must be in 0..60");
  return K;
}

}  // namespace

int LieAlgebra::index_of(const std::string& label) const {
  for (int i = 0; i < dim; ++i)
    if (labels[i] == label) return i;
  throw std::invalid_argument("algebra " + name + " has no basis element " + label);
}

CVec LieAlgebra::bracket(const CVec& x, const CVec& y) const {
  CVec out(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim; ++j) {
      if (y[j] == 0.0) continue;
      const cplx xy = x[i] * y[j];
      for (int k = 0; k < dim; ++k) out[k] += constant(k, i, j) * xy;
    }
  }
  return out;
}

cplx LieAlgebra::inner(const CVec& x, const CVec& y) const {
  cplx s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s += g[static_cast<std::size_t>(i) * dim + j] * x[i] * y[j];
  return s;
}

CVec ComplexStructure::apply(const CVec& v) const {
  CVec out(dim, 0.0);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i) out[k] += (*this)(k, i) * v[i];
  return out;
}

double antisymmetry_residual(const LieAlgebra& a) {
  double r = 0.0;
  for (int k = 0; k < a.dim; ++k)
    for (int i = 0; i < a.dim; ++i)
      for (int j = 0; j < a.dim; ++j) r = std::max(r, std::abs(a.constant(k, i, j) + a.constant(k, j, i)));
  return r;
}

double jacobi_residual(const LieAlgebra& a) {
  const int m = a.dim;
  double r = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const CVec x = basis_vector(m, i), y = basis_vector(m, j), z = basis_vector(m, k);
        CVec s = a.bracket(x, a.bracket(y, z));
        const CVec t = a.bracket(y, a.bracket(z, x)), u = a.bracket(z, a.bracket(x, y));
        for (int q = 0; q < m; ++q) s[q] += t[q] + u[q];
        r = std::max(r, norm(s));
      }
  return r;
}

double ad_skew_residual(const LieAlgebra& a) {
  const int m = a.dim;
  double r = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const CVec x = basis_vector(m, i), y = basis_vector(m, j), z = basis_vector(m, k);
        r = std::max(r, std::abs(a.inner(a.bracket(x, y), z) + a.inner(a.bracket(x, z), y)));
      }
  return r;
}

double root_space_residual(const LieAlgebra& a, const RootDatum& d) {
  double r = 0.0;
  for (std::size_t j = 0; j < d.root_vectors.size(); ++j)
    for (std::size_t s = 0; s < d.torus.size(); ++s) {
      const CVec lhs = a.bracket(real_vector(d.torus[s]), d.root_vectors[j]);
      r = std::max(r, norm(lhs - cplx(0.0, d.roots[j][s]) * d.root_vectors[j]));
    }
  return r;
}

double square_residual(const ComplexStructure& J) {
  const int m = J.dim;
  double r = 0.0;
  for (int i = 0; i < m; ++i) {
    const CVec v = J.apply(J.apply(basis_vector(m, i)));
    for (int k = 0; k < m; ++k) r = std::max(r, std::abs(v[k] + (k == i ? 1.0 : 0.0)));
  }
  return r;
}

double orthogonality_residual(const LieAlgebra& a, const ComplexStructure& J) {
  const int m = a.dim;
  double r = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const cplx lhs = a.inner(J.apply(basis_vector(m, i)), J.apply(basis_vector(m, j)));
      r = std::max(r, std::abs(lhs - a.g[static_cast<std::size_t>(i) * m + j]));
    }
  return r;
}

double integrability_residual(const LieAlgebra& a, const ComplexStructure& J) {
  const int m = a.dim;
  double r = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const CVec x = basis_vector(m, i), y = basis_vector(m, j);
      const CVec jx = J.apply(x), jy = J.apply(y);
      CVec v = J.apply(a.bracket(x, y) - a.bracket(jx, jy)) - a.bracket(jx, y) - a.bracket(x, jy);
      r = std::max(r, norm(v));
    }
  return r;
}

ComplexStructure samelson_structure(const LieAlgebra& a, const RootDatum& d, const std::vector<double>& torus_j,
                                    const std::vector<int>& signs) {
  const int m = a.dim;
  const int r = static_cast<int>(d.torus.size());
  const int p = static_cast<int>(d.root_vectors.size());
  if (m % 2 != 0) throw std::invalid_argument("algebra " + a.name + " is odd-dimensional");
  if (r + 2 * p != m) throw std::invalid_argument("root datum does not span the algebra");
  if (static_cast<int>(torus_j.size()) != r * r) throw std::invalid_argument("torus complex structure has wrong size");
  if (static_cast<int>(signs.size()) != p) throw std::invalid_argument("need one sign per positive root");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("root signs must be +1 or -1");

  // Selected roots must be closed under addition.
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      std::vector<double> sum(r);
      for (int s = 0; s < r; ++s) sum[s] = signs[i] * d.roots[i][s] + signs[j] * d.roots[j][s];
      for (int l = 0; l < p; ++l)
        for (double sg : {1.0, -1.0})
          if (close(sum, d.roots[l], sg) && sg != signs[l])
            throw std::invalid_argument("root choice not closed: roots " + std::to_string(i + 1) + " and " +
                                        std::to_string(j + 1) + " add to the unselected negative of root " +
                                        std::to_string(l + 1));
    }

  // Real basis {h_s, A_j, B_j} and its image under J.
  std::vector<cplx> basis(static_cast<std::size_t>(m) * m, 0.0), image(static_cast<std::size_t>(m) * m, 0.0);
  auto put = [m](std::vector<cplx>& M, int col, const std::vector<double>& v) {
    for (int k = 0; k < m; ++k) M[static_cast<std::size_t>(k) * m + col] = v[k];
  };
  for (int s = 0; s < r; ++s) {
    put(basis, s, d.torus[s]);
    std::vector<double> js(m, 0.0);
    for (int t = 0; t < r; ++t)
      for (int k = 0; k < m; ++k) js[k] += torus_j[static_cast<std::size_t>(t) * r + s] * d.torus[t][k];
    put(image, s, js);
  }
  for (int j = 0; j < p; ++j) {
    std::vector<double> A(m), B(m), mA(m), mB(m);
    for (int k = 0; k < m; ++k) {
      A[k] = d.root_vectors[j][k].real();
      B[k] = d.root_vectors[j][k].imag();
      mA[k] = -A[k];
      mB[k] = -B[k];
    }
    put(basis, r + 2 * j, A);
    put(basis, r + 2 * j + 1, B);
    // E = A + iB in the +i eigenspace gives JA = -B, JB = A; for conj(E) the signs flip.
    put(image, r + 2 * j, signs[j] > 0 ? mB : B);
    put(image, r + 2 * j + 1, signs[j] > 0 ? A : mA);
  }
  const auto inv = invert(basis, m, cplx(0.0), cplx(1.0));
  ComplexStructure J{m, std::vector<double>(static_cast<std::size_t>(m) * m, 0.0)};
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      cplx s = 0.0;
      for (int q = 0; q < m; ++q) s += image[static_cast<std::size_t>(i) * m + q] * inv[static_cast<std::size_t>(q) * m + k];
      J.J[static_cast<std::size_t>(i) * m + k] = s.real();
    }
  return J;
}

std::vector<CVec> unitary_frame(const LieAlgebra& a, const ComplexStructure& J) {
  const int m = a.dim;
  if (m % 2 != 0) throw std::invalid_argument("algebra " + a.name + " is odd-dimensional");
  std::vector<CVec> u, ju;
  for (int i = 0; i < m && static_cast<int>(u.size()) < m / 2; ++i) {
    CVec v = basis_vector(m, i);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < u.size(); ++k) {
        v = v - a.inner(v, u[k]) * u[k];
        v = v - a.inner(v, ju[k]) * ju[k];
      }
    const double len = std::sqrt(std::abs(a.inner(v, v)));
    if (len < 1e-8) continue;
    v = cplx(1.0 / len) * v;
    u.push_back(v);
    ju.push_back(J.apply(v));
  }
  if (static_cast<int>(u.size()) != m / 2) throw std::invalid_argument("could not build a J-adapted orthonormal basis");
  std::vector<CVec> e;
  for (std::size_t k = 0; k < u.size(); ++k) e.push_back(cplx(1.0 / std::sqrt(2.0)) * (u[k] - cplx(0.0, 1.0) * ju[k]));
  return e;
}

SamelsonConditions samelson_conditions(const LieAlgebra& a, const ComplexStructure& J) {
  const int m = a.dim, n = m / 2;
  const auto e = unitary_frame(a, J);
  SamelsonConditions c;
  c.dim = m;
  std::vector<cplx> M(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      c.isotropy = std::max(c.isotropy, std::abs(a.inner(e[i], e[j])));
      const CVec v = a.bracket(e[i], e[j]);
      const CVec jv = J.apply(v);
      CVec minus(m);
      for (int k = 0; k < m; ++k) minus[k] = 0.5 * (v[k] + cplx(0.0, 1.0) * jv[k]);
      c.closure = std::max(c.closure, norm(minus));
    }
    for (int k = 0; k < m; ++k) {
      M[static_cast<std::size_t>(k) * m + i] = e[i][k];
      M[static_cast<std::size_t>(k) * m + n + i] = std::conj(e[i][k]);
    }
  }
  c.span_rank = matrix_rank(M, m, m);
  return c;
}

AlgebraicBismutReport algebraic_bismut_check(const LieAlgebra& a, const ComplexStructure& J) {
  AlgebraicBismutReport rep;
  rep.integrability = integrability_residual(a, J);
  rep.ad_skew = ad_skew_residual(a);
  if (!a.bi_invariant || rep.ad_skew > 1e-10) throw ApplicabilityError("metric on " + a.name + " is not bi-invariant");
  if (rep.integrability > 1e-10) throw ApplicabilityError("complex structure is not integrable");

  const int n = a.dim / 2, nb = 2 * n;
  const auto e = unitary_frame(a, J);
  std::vector<CVec> E(nb), dual(nb);
  for (int k = 0; k < n; ++k) {
    E[k] = e[k];
    E[n + k] = conj(e[k]);
  }
  // psi_c(X) = <X, conj(E_c)>.
  for (int c = 0; c < nb; ++c) dual[c] = conj(E[c]);
  auto psi = [&](int c, const CVec& v) { return a.inner(v, dual[c]); };

  // d psi_c(E_a, E_b) = -psi_c([E_a, E_b]) for left-invariant forms.
  std::vector<FormValue> dpsi(nb, FormValue(n, 2, cplx(0.0)));
  for (int x = 0; x < nb; ++x)
    for (int y = x + 1; y < nb; ++y) {
      const CVec br = a.bracket(E[x], E[y]);
      for (int c = 0; c < nb; ++c) dpsi[c].add((Mask{1} << x) | (Mask{1} << y), -psi(c, br));
    }
  auto one = [n](int slot) {
    FormValue f(n, 1, cplx(0.0));
    f.add(Mask{1} << slot, cplx(1.0));
    return f;
  };

  // Chern connection from the (1,1) part of d phi.
  MatrixOfForms<cplx> theta(n, n, FormValue(n, 1, cplx(0.0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const cplx P = dpsi[i].value((Mask{1} << j) | (Mask{1} << (n + k)));
        theta(j, i).add(Mask{1} << (n + k), P);
        theta(i, j).add(Mask{1} << k, -std::conj(P));
      }
  std::vector<cplx> T(static_cast<std::size_t>(n) * n * n, 0.0);
  auto t = [&](int k, int i, int j) -> cplx& { return T[(static_cast<std::size_t>(k) * n + i) * n + j]; };
  for (int k = 0; k < n; ++k) {
    FormValue tau = dpsi[k];
    for (int j = 0; j < n; ++j) tau += wedge(theta(j, k), one(j));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        t(k, i, j) = 0.5 * tau.value((Mask{1} << i) | (Mask{1} << j));
        t(k, j, i) = -t(k, i, j);
      }
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const CVec br = a.bracket(e[i], e[j]);
      for (int k = 0; k < n; ++k) rep.torsion_vs_structure = std::max(rep.torsion_vs_structure, std::abs(t(k, i, j) - 0.5 * psi(k, br)));
    }

  MatrixOfForms<cplx> thetab = theta;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        thetab(i, j).add(Mask{1} << k, 2.0 * t(j, i, k));
        thetab(i, j).add(Mask{1} << (n + k), -2.0 * std::conj(t(i, j, k)));
      }
  rep.bismut_coefficients = thetab.max_abs();

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx jac = 0.0, quad = 0.0;
          for (int q = 0; q < n; ++q) {
            jac += t(q, i, j) * t(l, q, k) + t(q, j, k) * t(l, q, i) + t(q, k, i) * t(l, q, j);
            quad += t(i, l, q) * std::conj(t(k, j, q)) - t(i, k, q) * std::conj(t(l, j, q)) -
                    t(j, l, q) * std::conj(t(k, i, q)) + t(j, k, q) * std::conj(t(l, i, q)) -
                    t(q, k, l) * std::conj(t(q, i, j));
          }
          rep.torsion_jacobi = std::max(rep.torsion_jacobi, std::abs(jac));
          rep.dbar_quadratic = std::max(rep.dbar_quadratic, std::abs((2.0 / 3.0) * quad));
        }
  for (const auto& x : T) rep.torsion_norm2 += std::norm(x);
  rep.kahler = rep.torsion_norm2 < 1e-24;
  return rep;
}

double truncation_bound(const LieAlgebra& a, const std::vector<double>& x, int K) {
  factorial_overflow_guard(K);
  const int m = a.dim;
  double fro = 0.0;
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += x[i] * a.constant(k, i, j);
      fro += s * s;
    }
  return std::pow(std::sqrt(fro), K + 1) / std::tgamma(K + 3.0);
}

HermitianModel lie_group_model(const LieAlgebra& a, const ComplexStructure& J, std::string structure_name, int K,
                               double radius, double tolerance) {
  factorial_overflow_guard(K);
  const int m = a.dim;
  if (m % 2 != 0) throw std::invalid_argument("algebra " + a.name + " is odd-dimensional");
  if (m > kMaxJetVars) throw std::invalid_argument("algebra " + a.name + " is too large for the jet engine");
  if (integrability_residual(a, J) > 1e-10) throw ApplicabilityError("complex structure is not integrable");
  const int n = m / 2;
  const auto e = unitary_frame(a, J);
  // phi_k(X) = <X, conj(e_k)>: weights on the basis components of the Maurer-Cartan form.
  std::vector<cplx> w(static_cast<std::size_t>(n) * m, 0.0);
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) w[static_cast<std::size_t>(k) * m + p] += a.g[static_cast<std::size_t>(p) * m + q] * std::conj(e[k][q]);

  auto data = std::make_shared<LieHermitianStructure>(LieHermitianStructure{a, J, structure_name, K});
  HermitianModel model;
  // Parameterized structures print as "mixed,a=..,b=.." so the name parses back as a model ref.
  std::string shown = structure_name;
  if (const auto colon = shown.find(':'); colon != std::string::npos) shown[colon] = ',';
  model.name = "lie:algebra=" + a.name + ",structure=" + shown + ",K=" + std::to_string(K);
  model.dim = n;
  model.holomorphic_chart = false;
  model.lie = data;
  model.coframe = {n, [a, w, n, m, K](std::span<const Jet> z) {
                     const JetSpace& sp = z.front().space();
                     std::vector<Jet> x;
                     for (int i = 0; i < n; ++i) x.push_back(0.5 * (z[i] + conj(z[i])));
                     for (int i = 0; i < n; ++i) x.push_back(cplx(0.0, -0.5) * (z[i] - conj(z[i])));
                     std::vector<Jet> ad(static_cast<std::size_t>(m) * m, Jet(sp));
                     for (int k = 0; k < m; ++k)
                       for (int j = 0; j < m; ++j)
                         for (int i = 0; i < m; ++i) {
                           const double cc = a.constant(k, i, j);
                           if (cc != 0.0) ad[static_cast<std::size_t>(k) * m + j] += x[i] * cc;
                         }
                     // Horner for sum_k (-ad)^k / (k+1)!.
                     std::vector<double> coef(K + 1);
                     for (int k = 0; k <= K; ++k) coef[k] = 1.0 / std::tgamma(k + 2.0);
                     std::vector<Jet> S(static_cast<std::size_t>(m) * m, Jet(sp));
                     for (int i = 0; i < m; ++i) S[static_cast<std::size_t>(i) * m + i] += cplx(coef[K]);
                     for (int k = K - 1; k >= 0; --k) {
                       std::vector<Jet> next(static_cast<std::size_t>(m) * m, Jet(sp));
                       for (int i = 0; i < m; ++i) {
                         next[static_cast<std::size_t>(i) * m + i] += cplx(coef[k]);
                         for (int q = 0; q < m; ++q) {
                           const Jet& aiq = ad[static_cast<std::size_t>(i) * m + q];
                           if (aiq.is_zero()) continue;
                           for (int j = 0; j < m; ++j) next[static_cast<std::size_t>(i) * m + j].add_product(-aiq, S[static_cast<std::size_t>(q) * m + j]);
                         }
                       }
                       S = std::move(next);
                     }
                     // phi_k = sum_b (sum_p w_kp S_pb) dx_b, then dx into (dz, dzbar).
                     std::vector<Jet> C(static_cast<std::size_t>(n) * 2 * n, Jet(sp));
                     for (int k = 0; k < n; ++k)
                       for (int b = 0; b < m; ++b) {
                         Jet f(sp);
                         for (int p = 0; p < m; ++p) f += S[static_cast<std::size_t>(p) * m + b] * w[static_cast<std::size_t>(k) * m + p];
                         const int i = b % n;
                         const cplx dz = b < n ? cplx(0.5) : cplx(0.0, -0.5);
                         const cplx dzb = b < n ? cplx(0.5) : cplx(0.0, 0.5);
                         C[static_cast<std::size_t>(k) * 2 * n + i] += f * dz;
                         C[static_cast<std::size_t>(k) * 2 * n + n + i] += f * dzb;
                       }
                     return C;
                   }};
  auto real_coords = [n](const ChartPoint& p) {
    std::vector<double> x(2 * n);
    for (int i = 0; i < n; ++i) {
      x[i] = p.coords[i].real();
      x[n + i] = p.coords[i].imag();
    }
    return x;
  };
  model.in_domain = [a, K, radius, tolerance, real_coords](const ChartPoint& p) {
    const auto x = real_coords(p);
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::sqrt(r2) <= radius * (1.0 + 1e-12) && truncation_bound(a, x, K) <= tolerance;
  };
  model.sample = [n, radius](SplitMix64& rng) {
    const int mm = 2 * n;
    std::vector<double> g(mm);
    double len = 0.0;
    do {
      len = 0.0;
      for (int i = 0; i < mm; i += 2) {
        const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
        const double rr = std::sqrt(-2.0 * std::log(u1));
        g[i] = rr * std::cos(2.0 * std::numbers::pi * u2);
        g[i + 1] = rr * std::sin(2.0 * std::numbers::pi * u2);
      }
      for (double v : g) len += v * v;
    } while (len < 1e-12);
    const double r = radius * std::pow(rng.uniform(), 1.0 / mm) / std::sqrt(len);
    ChartPoint p;
    for (int i = 0; i < n; ++i) p.coords.emplace_back(r * g[i], r * g[n + i]);
    return p;
  };

  const bool flat = a.bi_invariant && ad_skew_residual(a) < 1e-10;
  model.flags.bismut_flat = flat;
  if (flat) {
    const auto rep = algebraic_bismut_check(a, J);
    model.flags.kahler = rep.kahler;
    model.flags.chern_flat = model.flags.riemann_flat = rep.kahler;
  }
  return model;
}

LieAlgebra lie_algebra(const std::string& name) {
  if (name == "abelian" || name == "abelian-4") return build("abelian-4", 0, 4);
  if (name == "abelian-2") return build(name, 0, 2);
  if (name == "abelian-6") return build(name, 0, 6);
  if (name == "su2") return build(name, 1, 0);
  if (name == "su2+r") return build(name, 1, 1);
  if (name == "su2+r3") return build(name, 1, 3);
  if (name == "su2+su2") return build(name, 2, 0);
  if (name == "su2+su2+r2") return build(name, 2, 2);
  throw std::invalid_argument("unknown Lie algebra '" + name + "'");
}

ComplexStructure named_structure(const LieAlgebra& a, const std::string& ref) {
  const auto colon = ref.find(':');
  const std::string id = ref.substr(0, colon);
  const auto params = colon == std::string::npos ? std::map<std::string, std::string>{} : parse_params(ref.substr(colon + 1));
  if (!a.root_datum) throw std::invalid_argument("algebra " + a.name + " has no root datum");
  const auto& d = *a.root_datum;
  const int r = static_cast<int>(d.torus.size());
  const int p = static_cast<int>(d.root_vectors.size());
  const std::vector<int> plus(p, 1);
  auto unsupported = [&]() {
    return std::invalid_argument("structure '" + id + "' is not available on " + a.name);
  };

  if (a.name.rfind("abelian", 0) == 0) {
    if (id != "standard") throw unsupported();
    std::vector<double> tj(static_cast<std::size_t>(r) * r, 0.0);
    for (int i = 0; i + 1 < r; i += 2) {
      tj[static_cast<std::size_t>(i + 1) * r + i] = 1.0;
      tj[static_cast<std::size_t>(i) * r + i + 1] = -1.0;
    }
    return samelson_structure(a, d, tj, plus);
  }
  if (a.name == "su2+r") {
    // torus (X, W): J W = X.
    const auto tj = torus_pairs(2, {{1, 0}});
    if (id == "standard") return samelson_structure(a, d, tj, plus);
    if (id == "reversed") return samelson_structure(a, d, tj, {-1});
    throw unsupported();
  }
  if (a.name == "su2+r3") {
    // torus (X, W1, W2, W3): J X = W1, J W2 = W3.
    if (id == "standard") return samelson_structure(a, d, torus_pairs(4, {{0, 1}, {2, 3}}), plus);
    throw unsupported();
  }
  if (a.name == "su2+su2") {
    // torus (X, X1): J X = X1.
    if (id == "standard" || id == "central-ce") return samelson_structure(a, d, torus_pairs(2, {{0, 1}}), plus);
    if (id == "nonintegrable") {
      // Central structure conjugated by a 45 degree rotation of the (Y, Y1) plane. Still
      // orthogonal with J^2 = -I, but the rotation is not an automorphism.
      const auto ce = samelson_structure(a, d, torus_pairs(2, {{0, 1}}), plus);
      const double c = std::sqrt(0.5);
      std::vector<double> Q(36, 0.0);
      for (int i = 0; i < 6; ++i) Q[i * 6 + i] = 1.0;
      Q[1 * 6 + 1] = Q[4 * 6 + 4] = c;
      Q[1 * 6 + 4] = -c;
      Q[4 * 6 + 1] = c;
      ComplexStructure J{6, std::vector<double>(36, 0.0)};
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          for (int k = 0; k < 6; ++k)
            for (int l = 0; l < 6; ++l) J.J[i * 6 + j] += Q[i * 6 + k] * ce(k, l) * Q[j * 6 + l];
      return J;
    }
    throw unsupported();
  }
  if (a.name == "su2+su2+r2") {
    double ca = 1.0, cb = 0.0;
    if (id == "mixed") {
      if (!params.count("a") || !params.count("b")) throw std::invalid_argument("mixed structure needs a=..,b=..");
      ca = parse_double(params.at("a"), "a");
      cb = parse_double(params.at("b"), "b");
      if (std::abs(ca * ca + cb * cb - 1.0) > 1e-12) throw std::invalid_argument("mixed structure needs a^2 + b^2 = 1");
    } else if (id != "standard") {
      throw unsupported();
    }
    // torus (X, X1, W1, W2) playing (X, Y, Z, W): JX = aY + bZ, JY = -aX - bW, JZ = -bX + aW, JW = bY - aZ.
    std::vector<double> tj(16, 0.0);
    auto set = [&](int from, int to, double v) { tj[static_cast<std::size_t>(to) * 4 + from] = v; };
    set(0, 1, ca), set(0, 2, cb);
    set(1, 0, -ca), set(1, 3, -cb);
    set(2, 0, -cb), set(2, 3, ca);
    set(3, 1, cb), set(3, 2, -ca);
    return samelson_structure(a, d, tj, plus);
  }
  throw unsupported();
}

std::vector<std::pair<std::string, std::string>> lie_listing() {
  return {
      {"abelian-2, abelian-4, abelian-6", "vector group R^2k; structure: standard"},
      {"su2", "su(2) with [X,Y] = 2Z and cyclic; odd-dimensional, no complex structure"},
      {"su2+r", "su(2) + R; structures: standard (JW = X, JY = Z), reversed (JY = -Z)"},
      {"su2+r3", "su(2) + R^3; structure: standard (JY = Z, JX = W1, JW2 = W3)"},
      {"su2+su2", "su(2) + su(2); structures: central-ce (JX = X1, JY = Z, JY1 = Z1), nonintegrable"},
      {"su2+su2+r2", "su(2) + su(2) + R^2; structures: standard, mixed:a=..,b=.. with a^2 + b^2 = 1"},
  };
}

}  // namespace hflat

#include "hflat/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <stdexcept>

#include "hflat/errors.hpp"
#include "hflat/identities.hpp"
#include "hflat/lie.hpp"
#include "hflat/linalg.hpp"

namespace hflat {

namespace {

using A = Applicability;

double samelson_residual(const LieHermitianStructure& s) {
  const auto c = samelson_conditions(s.algebra, s.J);
  return std::max({c.isotropy, c.closure, static_cast<double>(c.dim - c.span_rank)});
}

const std::vector<cplx>& psh_fd(CheckContext& c) {
  if (!c.psh_difference) c.psh_difference = psh_difference_side(c.model, c.point, c.geo);
  return *c.psh_difference;
}

std::vector<CheckDescriptor> build_registry() {
  auto geo = [](double (*f)(PointGeometry&)) { return [f](CheckContext& c) { return f(c.geo); }; };
  std::vector<CheckDescriptor> r = {
      {"chern-structure", "Chern structure equations: torsion forms of type (2,0), theta skew-Hermitian",
       A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 1, geo(chern_structure_residual)},
      {"chern-bianchi-torsion", "first Bianchi identity d tau = -theta^t ^ tau + Theta^t ^ phi", A::AnyMetric, 1e-8,
       ResidualKind::MaxAbs, 2, geo(chern_bianchi_torsion_residual)},
      {"chern-bianchi-curvature", "second Bianchi identity d Theta = theta ^ Theta - Theta ^ theta", A::AnyMetric,
       1e-8, ResidualKind::MaxAbs, 3, geo(chern_bianchi_curvature_residual)},
      {"riem-structure", "Levi-Civita connection in (theta1, theta2) blocks is torsion free and metric",
       A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 1, geo(riemannian_structure_residual)},
      {"gauduchon-form", "del omega^(n-1) = -2 eta ^ omega^(n-1)", A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 1,
       geo(gauduchon_residual)},
      {"gray-02", "the (0,2) part of Theta2 vanishes", A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 2,
       geo(gray_residual)},
      {"chern-curvature-type", "Chern curvature is of type (1,1)", A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 2,
       geo(chern_curvature_type_residual)},
      {"chern-curvature-torsion-dbar", "2 T^k_{ij,lbar} = R^c_{i kbar j lbar} - R^c_{j kbar i lbar}",
       A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 2, geo(chern_curvature_torsion_dbar_residual)},
      {"riem-ijk-lbar", "R_{ijk lbar} from Chern derivatives of torsion and quadratic torsion terms", A::AnyMetric,
       1e-8, ResidualKind::MaxAbs, 2, geo(riem_ijk_lbar_residual)},
      {"riem-ij-kbar-lbar", "R_{ij kbar lbar} from Chern derivatives of torsion and quadratic torsion terms",
       A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 2, geo(riem_ij_kbar_lbar_residual)},
      {"riem-i-jbar-k-lbar", "R_{i jbar k lbar} against the Chern curvature and torsion", A::AnyMetric, 1e-8,
       ResidualKind::MaxAbs, 2, geo(riem_i_jbar_k_lbar_residual)},
      {"riem-holomorphic-vanish", "R_{ijkl} = 0 and R_{ibar jbar kbar lbar} = 0", A::AnyMetric, 1e-8,
       ResidualKind::MaxAbs, 2, geo(riem_holomorphic_vanish_residual)},
      {"torsion-norm-8x", "|T^c|^2 = 8 |T|^2", A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 1,
       geo(chern_torsion_norm_residual)},
      {"torsion-norm-24x", "|T^b|^2 = 24 |T|^2", A::AnyMetric, 1e-8, ResidualKind::MaxAbs, 1,
       geo(bismut_torsion_norm_residual)},
      {"n2-eta-relation", "surfaces: |T|^2 = 2 |eta|^2 with eta_1 = -T^2_12, eta_2 = T^1_12", A::SurfaceOnly, 1e-8,
       ResidualKind::MaxAbs, 1, geo(surface_eta_residual)},
      {"bismut-torsion-skew", "Bismut torsion is totally skew-symmetric", A::AnyMetric, 1e-8, ResidualKind::MaxAbs,
       1, geo(bismut_torsion_skew_residual)},
      {"bismut-torsion-holo-parallel", "Bismut flat: T^j_{ik,l} = 0", A::BismutFlat, 1e-8, ResidualKind::MaxAbs, 2,
       geo(bismut_holomorphic_parallel_residual)},
      {"bismut-torsion-jacobi", "Bismut flat: sum_r (T^r_ij T^l_rk + T^r_jk T^l_ri + T^r_ki T^l_rj) = 0",
       A::BismutFlat, 1e-8, ResidualKind::MaxAbs, 1, geo(bismut_torsion_jacobi_residual)},
      {"bismut-torsion-dbar-symmetry", "Bismut flat: T^i_{kl,jbar} = -T^j_{kl,ibar} = conj(T^k_{ij,lbar})",
       A::BismutFlat, 1e-8, ResidualKind::MaxAbs, 2, geo(bismut_dbar_symmetry_residual)},
      {"bismut-torsion-dbar-quadratic", "Bismut flat: T^i_{kl,jbar} as a quadratic expression in T",
       A::BismutFlat, 1e-8, ResidualKind::MaxAbs, 2, geo(bismut_dbar_quadratic_residual)},
      {"bismut-eta-trace", "Bismut flat: sum_r eta_{r,rbar} = (2/3)(|T|^2 - 2|eta|^2)", A::BismutFlat, 1e-8,
       ResidualKind::MaxAbs, 2, geo(bismut_eta_trace_residual)},
      {"bismut-ddbar-omega", "Bismut flat: -i ddbar omega^(n-1) = (4/3n)(|T|^2 - 2|eta|^2) omega^n (pointwise)",
       A::BismutFlat, 1e-8, ResidualKind::MaxAbs, 2, geo(bismut_ddbar_omega_residual)},
      {"bismut-psh", "Bismut flat: finite-difference ddbar |T|^2 equals sum T^i_{jk,lbar} conj(T^i_{jk,mbar})",
       A::BismutFlatHolomorphic, 1e-4, ResidualKind::MaxAbs, 2,
       [](CheckContext& c) {
         const auto exact = psh_exact_side(c.geo);
         const auto& fd = psh_fd(c);
         double r = 0.0;
         for (std::size_t k = 0; k < exact.size(); ++k) r = std::max(r, std::abs(exact[k] - fd[k]));
         return r;
       }},
      {"bismut-psh-eigen", "Bismut flat: |T|^2 is plurisubharmonic (smallest eigenvalue of ddbar |T|^2)",
       A::BismutFlatHolomorphic, 1e-5, ResidualKind::MinEigenvalue, 1,
       [](CheckContext& c) { return hermitian_min_eigenvalue(psh_fd(c), c.geo.dim()); }},
      {"af-parallel", "Bismut flat: Bismut torsion is parallel for the connection (2/3) LC + (1/3) Bismut",
       A::BismutFlat, 1e-8, ResidualKind::MaxAbs, 2, geo(agricola_friedrich_residual)},
      {"chern-curvature-zero", "Chern-flat model: Theta = 0", A::ChernFlat, 1e-8, ResidualKind::MaxAbs, 2,
       geo(chern_curvature_norm)},
      {"riem-curvature-zero", "Riemann-flat model: Theta1 = Theta2 = 0", A::RiemannFlat, 1e-8, ResidualKind::MaxAbs,
       2, geo(riemannian_curvature_norm)},
      {"bismut-curvature-zero", "Bismut-flat model: Theta^b = 0", A::BismutFlat, 1e-8, ResidualKind::MaxAbs, 2,
       geo(bismut_curvature_norm)},
      {"balanced-implies-kahler", "Bismut flat and balanced at a point (|eta| < 1e-10) forces T = 0 there",
       A::BismutFlat, 1e-9, ResidualKind::MaxAbs, 1, geo(balanced_kahler_residual)},
      {"kahler-torsion-zero", "Kahler model: T = 0", A::Kahler, 1e-8, ResidualKind::MaxAbs, 1,
       [](CheckContext& c) { return std::sqrt(c.geo.torsion_norm2()); }},
      {"reference-torsion", "torsion matches the model's closed form", A::ReferenceTorsion, 1e-10,
       ResidualKind::MaxAbs, 1,
       [](CheckContext& c) { return reference_torsion_residual(c.model, c.point, c.geo); }},
      {"reference-riemannian", "theta1 = alpha I and theta2 = beta E match the closed forms",
       A::ReferenceRiemannian, 1e-9, ResidualKind::MaxAbs, 1,
       [](CheckContext& c) { return reference_riemannian_residual(c.model, c.point, c.geo); }},
      {"lie-ad-skew", "bi-invariance <[X,Y],Z> = -<[X,Z],Y> and the Jacobi identity", A::LieAlgebraic, 1e-12,
       ResidualKind::MaxAbs, 1,
       [](CheckContext& c) { return std::max(ad_skew_residual(c.model.lie->algebra), jacobi_residual(c.model.lie->algebra)); }},
      {"lie-integrability", "J([X,Y] - [JX,JY]) = [JX,Y] + [X,JY], J^2 = -I, J orthogonal", A::LieAlgebraic, 1e-12,
       ResidualKind::MaxAbs, 1,
       [](CheckContext& c) {
         const auto& s = *c.model.lie;
         return std::max({integrability_residual(s.algebra, s.J), square_residual(s.J),
                          orthogonality_residual(s.algebra, s.J)});
       }},
      {"lie-samelson", "+i eigenspace is isotropic, closed under brackets, and complementary to its conjugate",
       A::LieAlgebraic, 1e-12, ResidualKind::MaxAbs, 1, [](CheckContext& c) { return samelson_residual(*c.model.lie); }},
      {"lie-algebraic-bismut", "left-invariant frame: T = C/2 and all Bismut connection coefficients vanish",
       A::LieAlgebraic, 1e-12, ResidualKind::MaxAbs, 1,
       [](CheckContext& c) {
         const auto rep = algebraic_bismut_check(c.model.lie->algebra, c.model.lie->J);
         return std::max(rep.torsion_vs_structure, rep.bismut_coefficients);
       }},
      {"lie-torsion-jacobi", "left-invariant frame: Jacobi-type torsion identity and constant-torsion dbar relation",
       A::LieAlgebraic, 1e-12, ResidualKind::MaxAbs, 1,
       [](CheckContext& c) {
         const auto rep = algebraic_bismut_check(c.model.lie->algebra, c.model.lie->J);
         return std::max(rep.torsion_jacobi, rep.dbar_quadratic);
       }},
  };
  return r;
}

std::string complex_text(cplx z) {
  char buf[80];
  // Adding 0.0 turns -0 into +0.
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real() + 0.0, z.imag() + 0.0);
  return buf;
}

[[noreturn]] void rethrow_at(std::exception_ptr e, const std::string& where) {
  try {
    std::rethrow_exception(e);
  } catch (const SingularCoframeError& x) {
    throw SingularCoframeError(std::string(x.what()) + " " + where);
  } catch (const IntegrabilityError& x) {
    throw IntegrabilityError(std::string(x.what()) + " " + where, x.magnitude());
  } catch (const DomainError& x) {
    throw DomainError(std::string(x.what()) + " " + where);
  } catch (const ApplicabilityError& x) {
    throw ApplicabilityError(std::string(x.what()) + " " + where);
  } catch (const JetError& x) {
    throw JetError(std::string(x.what()) + " " + where);
  } catch (const Error& x) {
    throw Error(std::string(x.what()) + " " + where);
  }
}

/// Larger is worse; NaN is worst of all.
double badness(ResidualKind k, double v) {
  if (std::isnan(v)) return std::numeric_limits<double>::infinity();
  return k == ResidualKind::MaxAbs ? v : -v;
}

}  // namespace

const std::vector<CheckDescriptor>& check_registry() {
  static const std::vector<CheckDescriptor> registry = build_registry();
  return registry;
}

const CheckDescriptor& find_check(const std::string& id) {
  for (const auto& c : check_registry())
    if (c.id == id) return c;
  throw std::invalid_argument("unknown check '" + id + "'");
}

std::string applicability_name(Applicability a) {
  switch (a) {
    case A::AnyMetric: return "any metric";
    case A::SurfaceOnly: return "complex surfaces";
    case A::ChernFlat: return "Chern-flat models";
    case A::RiemannFlat: return "Riemann-flat models";
    case A::BismutFlat: return "Bismut-flat models";
    case A::BismutFlatHolomorphic: return "Bismut-flat models in a holomorphic chart";
    case A::Kahler: return "Kahler models";
    case A::ReferenceTorsion: return "models with closed-form torsion";
    case A::ReferenceRiemannian: return "models with closed-form Levi-Civita blocks";
    case A::LieAlgebraic: return "Lie group models";
  }
  return "unknown";
}

std::string kind_name(ResidualKind k) { return k == ResidualKind::MaxAbs ? "max-abs" : "min-eigenvalue"; }

std::string inapplicable_reason(const CheckDescriptor& c, const HermitianModel& m) {
  bool ok = true;
  switch (c.applicability) {
    case A::AnyMetric: break;
    case A::SurfaceOnly: ok = m.dim == 2; break;
    case A::ChernFlat: ok = m.flags.chern_flat; break;
    case A::RiemannFlat: ok = m.flags.riemann_flat; break;
    case A::BismutFlat: ok = m.flags.bismut_flat; break;
    case A::BismutFlatHolomorphic: ok = m.flags.bismut_flat && m.holomorphic_chart; break;
    case A::Kahler: ok = m.flags.kahler; break;
    case A::ReferenceTorsion: ok = m.reference_torsion || m.reference_chern_torsion_norm; break;
    case A::ReferenceRiemannian: ok = static_cast<bool>(m.reference_riemannian) && m.dim == 2; break;
    case A::LieAlgebraic: ok = m.lie != nullptr; break;
  }
  if (ok) return "";
  return "check " + c.id + " applies to " + applicability_name(c.applicability) + ", not to " + m.name;
}

bool VerificationReport::passed() const {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::string format_point(const ChartPoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.coords.size(); ++i) s += (i ? ", " : "") + complex_text(p.coords[i]);
  return s + ")";
}

std::vector<ChartPoint> sample_points(const HermitianModel& m, std::uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("point count must be positive");
  std::vector<ChartPoint> pts;
  const std::uint64_t limit = 10 * static_cast<std::uint64_t>(count);
  for (std::uint64_t a = 0; static_cast<int>(pts.size()) < count; ++a) {
    if (a >= limit)
      throw SamplingError("only " + std::to_string(pts.size()) + " of " + std::to_string(count) +
                          " points accepted after " + std::to_string(limit) + " draws for " + m.name);
    auto rng = SplitMix64::stream(seed, a);
    ChartPoint p = m.sample(rng);
    bool finite = true;
    for (const auto& z : p.coords) finite = finite && std::isfinite(z.real()) && std::isfinite(z.imag());
    if (finite && (!m.in_domain || m.in_domain(p))) pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<const CheckDescriptor*> select_checks(const HermitianModel& m, const std::vector<std::string>& ids) {
  std::vector<const CheckDescriptor*> out;
  if (ids.empty()) {
    for (const auto& c : check_registry())
      if (inapplicable_reason(c, m).empty()) out.push_back(&c);
    return out;
  }
  for (const auto& id : ids) {
    const auto& c = find_check(id);
    const auto why = inapplicable_reason(c, m);
    if (!why.empty()) throw ApplicabilityError(why);
    for (const auto* seen : out)
      if (seen == &c) throw std::invalid_argument("check '" + id + "' requested twice");
    out.push_back(&c);
  }
  return out;
}

std::vector<double> evaluate_point(const HermitianModel& m, const ChartPoint& p,
                                   const std::vector<const CheckDescriptor*>& checks) {
  int order = 1;
  for (const auto* c : checks) order = std::max(order, c->order);
  PointGeometry geo = m.geometry(p, order);
  CheckContext ctx{m, p, geo, std::nullopt};
  std::vector<double> out;
  out.reserve(checks.size());
  for (const auto* c : checks) out.push_back(c->eval(ctx));
  return out;
}

VerificationReport run_suite(const HermitianModel& m, const SuiteOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto checks = select_checks(m, opt.checks);
  for (const auto& [id, tol] : opt.tolerances) {
    find_check(id);
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance for " + id + " must be positive");
  }
  VerificationReport rep;
  rep.model = m.name;
  rep.seed = opt.seed;
  rep.count = opt.count;
  rep.points = sample_points(m, opt.seed, opt.count);

  const int np = static_cast<int>(rep.points.size());
  std::vector<std::vector<double>> values(np);
  std::vector<std::exception_ptr> errors(np);
  auto work = [&](int i) {
    try {
      values[i] = evaluate_point(m, rep.points[i], checks);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (opt.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < np; ++i) work(i);
  } else {
    for (int i = 0; i < np; ++i) work(i);
  }
  for (int i = 0; i < np; ++i)
    if (errors[i]) rethrow_at(errors[i], "at point " + std::to_string(i) + " " + format_point(rep.points[i]));

  for (std::size_t k = 0; k < checks.size(); ++k) {
    const auto& c = *checks[k];
    CheckResult r;
    r.id = c.id;
    r.statement = c.statement;
    r.kind = c.kind;
    const auto it = opt.tolerances.find(c.id);
    r.tolerance = it == opt.tolerances.end() ? c.tolerance : it->second;
    r.point_index = 0;
    r.residual = values[0][k];
    for (int i = 1; i < np; ++i)
      if (badness(c.kind, values[i][k]) > badness(c.kind, r.residual)) {
        r.residual = values[i][k];
        r.point_index = i;
      }
    r.pass = !std::isnan(r.residual) &&
             (c.kind == ResidualKind::MaxAbs ? r.residual <= r.tolerance : r.residual > -r.tolerance);
    rep.results.push_back(r);
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

nlohmann::ordered_json report_json(const VerificationReport& r, bool include_timing) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["model"] = r.model;
  j["seed"] = r.seed;
  j["points"] = r.count;
  j["passed"] = r.passed();
  auto& checks = j["checks"] = nlohmann::ordered_json::object();
  for (const auto& c : r.results) {
    nlohmann::ordered_json e;
    e["statement"] = c.statement;
    e["kind"] = kind_name(c.kind);
    e["tolerance"] = c.tolerance;
    e["residual"] = std::isnan(c.residual) ? nlohmann::ordered_json("nan") : nlohmann::ordered_json(c.residual);
    e["point_index"] = c.point_index;
    auto pt = nlohmann::ordered_json::array();
    for (const auto& z : r.points[c.point_index].coords) pt.push_back({z.real(), z.imag()});
    e["point"] = pt;
    e["pass"] = c.pass;
    checks[c.id] = e;
  }
  if (include_timing) j["wall_time_seconds"] = r.wall_time;
  j["note"] =
      "All checks are pointwise. The global integral identity on compact quotients behind the "
      "balanced-implies-Kahler statement is not evaluated.";
  return j;
}

}  // namespace hflat

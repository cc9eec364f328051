// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "../tests/fixtures.hpp"
#include "hflat/catalog.hpp"
#include "hflat/cli.hpp"
#include "hflat/errors.hpp"
#include "hflat/lie.hpp"
#include "hflat/suite.hpp"

using namespace hflat;

namespace {

// Pinned tolerances and sizes.
constexpr double kHopfFlat = 1e-8;
constexpr int kHopfPoints = 200;
constexpr double kHopfSeconds = 10.0;
constexpr double kChernFlat = 1e-8;
constexpr double kBoothbyTorsion = 1e-10;
constexpr int kFamilyPoints = 50;
constexpr int kRandomFamilies = 10;
constexpr double kRiemFlat = 1e-8;
constexpr double kRiemBlocks = 1e-9;
constexpr double kGeneric = 1e-8;
constexpr int kPerturbedPerDim = 10;
constexpr double kGenericSeconds = 60.0;
constexpr double kBismutCovariant = 1e-7;
constexpr double kHopfTorsionNorm = 1e-10;
constexpr double kParallel = 1e-8;
constexpr int kBismutPoints = 50;
constexpr double kPshMatch = 1e-4;
constexpr double kPshEigen = 1e-5;
constexpr int kPshPoints = 25;
constexpr double kAlgebraic = 1e-12;
constexpr double kExpChart = 1e-6;
constexpr int kExpPoints = 25;
constexpr double kTamper = 1e-3;
constexpr double kTamperDetect = 1e-5;

constexpr std::uint64_t kSeed = 20240607;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

VerificationReport run(const HermitianModel& m, std::vector<std::string> checks, int count,
                       std::uint64_t seed = kSeed) {
  SuiteOptions o;
  o.checks = std::move(checks);
  o.count = count;
  o.seed = seed;
  return run_suite(m, o);
}

/// Largest residual of a check over several reports (smallest value for min-eigenvalue checks).
double worst(const std::vector<VerificationReport>& reports, const std::string& id) {
  double w = 0.0;
  bool first = true, lowest = false;
  for (const auto& r : reports)
    for (const auto& c : r.results)
      if (c.id == id) {
        lowest = c.kind == ResidualKind::MinEigenvalue;
        if (std::isnan(c.residual)) return c.residual;
        if (first || (lowest ? c.residual < w : c.residual > w)) w = c.residual;
        first = false;
      }
  return w;
}

Outcome hopf_flatness() {
  const auto t = std::chrono::steady_clock::now();
  const auto r = run(hopf_surface(1.0), {"bismut-curvature-zero"}, kHopfPoints);
  const double secs = seconds_since(t), res = worst({r}, "bismut-curvature-zero");
  return {res < kHopfFlat && secs < kHopfSeconds,
          "max |Theta^b| " + sci(res) + " < " + sci(kHopfFlat) + " over " + std::to_string(kHopfPoints) +
              " points in 0.5 < |z| < 2, " + sci(secs) + " s < " + sci(kHopfSeconds) + " s"};
}

Outcome boothby_family() {
  SplitMix64 rng(kSeed);
  std::vector<VerificationReport> reports;
  for (int k = 0; k < kRandomFamilies; ++k) {
    const std::string f = random_holomorphic_polynomial(rng, 2, 2, 1.0);
    const std::string h = random_holomorphic_polynomial(rng, 2, 2, 1.0);
    reports.push_back(run(boothby(parse_expr(f, 2), parse_expr(h, 2), f, h),
                          {"chern-curvature-zero", "reference-torsion"}, kFamilyPoints));
  }
  reports.push_back(run(complete_chern_flat(), {"chern-curvature-zero", "reference-torsion"}, kFamilyPoints));
  const double flat = worst(reports, "chern-curvature-zero"), tors = worst(reports, "reference-torsion");
  return {flat < kChernFlat && tors < kBoothbyTorsion,
          std::to_string(kRandomFamilies) + " random (f, h) + complete example: max |Theta| " + sci(flat) + " < " +
              sci(kChernFlat) + ", torsion vs closed form " + sci(tors) + " < " + sci(kBoothbyTorsion)};
}

Outcome riemann_flat_family() {
  SplitMix64 rng(kSeed + 1);
  std::vector<VerificationReport> reports;
  const std::vector<std::string> checks = {"riem-curvature-zero", "reference-riemannian"};
  for (int k = 0; k < kRandomFamilies; ++k) {
    const std::string u = random_holomorphic_polynomial(rng, 2, 2, 1.0);
    const std::string v = random_holomorphic_polynomial(rng, 2, 2, 1.0);
    const std::string f = random_holomorphic_polynomial(rng, 2, 2, 1.0);
    reports.push_back(
        run(riemann_flat_triple(parse_expr(u, 2), parse_expr(v, 2), parse_expr(f, 2)), checks, kFamilyPoints));
  }
  reports.push_back(run(triple_g1(), checks, kFamilyPoints));
  reports.push_back(run(triple_g2(), checks, kFamilyPoints));
  const double flat = worst(reports, "riem-curvature-zero"), blocks = worst(reports, "reference-riemannian");
  return {flat < kRiemFlat && blocks < kRiemBlocks,
          std::to_string(kRandomFamilies) + " random (u, v, f) + g1, g2: max |Theta1|, |Theta2| " + sci(flat) +
              " < " + sci(kRiemFlat) + ", theta1/theta2 vs closed form " + sci(blocks) + " < " + sci(kRiemBlocks)};
}

Outcome generic_battery() {
  const auto t = std::chrono::steady_clock::now();
  double res = 0.0, scale = 0.0;
  std::string where;
  int models = 0;
  for (int dim : {2, 3})
    for (int s = 1; s <= kPerturbedPerDim; ++s) {
      const auto m = perturbed_metric(kSeed + 100 * dim + s, 0.15, dim);
      std::vector<std::string> ids;
      for (const auto& c : check_registry())
        if (c.applicability == Applicability::AnyMetric) ids.push_back(c.id);
      const auto r = run(m, ids, kFamilyPoints);
      PointGeometry g = m.geometry(r.points.front(), 2);
      scale = std::max(scale, std::sqrt(g.torsion_norm2()));
      for (const auto& c : r.results)
        if (std::isnan(c.residual) || c.residual > res) {
          res = c.residual;
          where = c.id + " on " + m.name;
        }
      ++models;
    }
  const double secs = seconds_since(t);
  return {res < kGeneric && secs < kGenericSeconds,
          std::to_string(models) + " perturbed metrics (n = 2, 3): worst residual " + sci(res) + " (" + where +
              ") < " + sci(kGeneric) + " at torsion scale |T| up to " + sci(scale) + ", " + sci(secs) + " s < " +
              sci(kGenericSeconds) + " s"};
}

Outcome bismut_battery() {
  const std::vector<std::string> covariant = {"bismut-torsion-holo-parallel", "bismut-torsion-jacobi",
                                              "bismut-torsion-dbar-symmetry", "bismut-torsion-dbar-quadratic",
                                              "bismut-eta-trace", "bismut-ddbar-omega"};
  auto ids = covariant;
  ids.push_back("af-parallel");
  std::vector<VerificationReport> reports;
  const auto hopf = hopf_surface(1.0);
  reports.push_back(run(hopf, ids, kBismutPoints));
  reports.push_back(run(product(hopf, euclidean(1)), ids, kBismutPoints));
  double cov = 0.0;
  for (const auto& id : covariant) cov = std::max(cov, worst(reports, id));
  const double af = worst(reports, "af-parallel");
  double norm = 0.0;
  for (const auto& p : sample_points(hopf, kSeed, kBismutPoints)) {
    PointGeometry g = hopf.geometry(p, 1);
    norm = std::max(norm, std::abs(g.torsion_norm2() - 0.5));
  }
  return {cov < kBismutCovariant && norm < kHopfTorsionNorm && af < kParallel,
          "hopf, hopf x C: covariant torsion identities, trace and ddbar omega " + sci(cov) + " < " +
              sci(kBismutCovariant) + "; ||T|^2 - 1/2| " + sci(norm) + " < " + sci(kHopfTorsionNorm) +
              "; parallel Bismut torsion " + sci(af) + " < " + sci(kParallel)};
}

Outcome plurisubharmonic() {
  const auto r = run(hopf_surface(1.0), {"bismut-psh", "bismut-psh-eigen"}, kPshPoints);
  const double match = worst({r}, "bismut-psh"), eig = worst({r}, "bismut-psh-eigen");
  return {match < kPshMatch && eig > -kPshEigen,
          "hopf, " + std::to_string(kPshPoints) + " points: finite-difference Hessian vs torsion derivatives " +
              sci(match) + " < " + sci(kPshMatch) + ", min eigenvalue " + sci(eig) + " > " + sci(-kPshEigen)};
}

Outcome algebraic() {
  const std::vector<std::string> ids = {"lie-ad-skew", "lie-integrability", "lie-samelson", "lie-algebraic-bismut",
                                        "lie-torsion-jacobi"};
  double res = 0.0;
  for (const auto& [alg, st] : {std::pair{"su2+su2", "central-ce"}, std::pair{"su2+r", "standard"}}) {
    const auto a = lie_algebra(alg);
    const auto m = lie_group_model(a, named_structure(a, st), st);
    const auto r = run(m, ids, 1);
    for (const auto& id : ids) res = std::max(res, worst({r}, id));
  }
  return {res < kAlgebraic, "su(2)+su(2) Calabi-Eckmann and su(2)+R: bi-invariance, integrability, eigenspace "
                            "subalgebra, Bismut coefficients, torsion identities " +
                                sci(res) + " < " + sci(kAlgebraic)};
}

Outcome exp_chart() {
  const auto a = lie_algebra("su2+su2");
  const int K = 20;
  const double radius = 0.5;
  const auto m = lie_group_model(a, named_structure(a, "central-ce"), "central-ce", K, radius, kExpChart);
  const auto r = run(m, {"bismut-curvature-zero"}, kExpPoints);
  double bound = 0.0;
  for (const auto& p : r.points) {
    std::vector<double> x(a.dim);
    for (int i = 0; i < a.dim / 2; ++i) {
      x[i] = p.coords[i].real();
      x[a.dim / 2 + i] = p.coords[i].imag();
    }
    bound = std::max(bound, truncation_bound(a, x, K));
  }
  const double res = worst({r}, "bismut-curvature-zero");
  return {res < kExpChart && bound <= kExpChart,
          "su(2)+su(2), K = 20, |x| <= 0.5, " + std::to_string(kExpPoints) + " points: max |Theta^b| " + sci(res) +
              " < " + sci(kExpChart) + ", series remainder bound " + sci(bound)};
}

Outcome non_vacuity() {
  const auto r = run(testing::tampered_hopf(kTamper), {"bismut-curvature-zero"}, kHopfPoints);
  const double res = worst({r}, "bismut-curvature-zero");
  return {!r.passed() && res > kTamperDetect, "hopf coframe shifted by " + sci(kTamper) +
                                                  ": flatness check fails with max |Theta^b| " + sci(res) + " > " +
                                                  sci(kTamperDetect)};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / ("hflat_acceptance_" + std::to_string(kSeed));
  std::filesystem::create_directories(dir);
  auto report = [&](const std::string& file, bool serial) {
    std::vector<std::string> args = {"verify", "--model", "hopf", "--seed", "7", "--points", "100", "--out",
                                     (dir / file).string()};
    if (serial) args.push_back("--serial");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    std::ifstream in(dir / file, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return std::pair{code, s.str()};
  };
  const auto a = report("a.json", false), b = report("b.json", false), c = report("c.json", true);
  std::filesystem::remove_all(dir);
  const bool same = !a.second.empty() && a.second == b.second && a.second == c.second;
  return {same && a.first == 0, std::string("two runs of verify --model hopf --seed 7 --points 100 ") +
                                    (same ? "are byte-identical (" + std::to_string(a.second.size()) + " bytes)"
                                          : "differ") +
                                    ", also with --serial"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"hopf Bismut flatness", hopf_flatness},
      {"Boothby Chern flatness", boothby_family},
      {"Riemannian-flat triples", riemann_flat_family},
      {"general-metric identity battery", generic_battery},
      {"Bismut-flat identity battery", bismut_battery},
      {"plurisubharmonicity of |T|^2", plurisubharmonic},
      {"Lie-algebraic suite", algebraic},
      {"exponential chart cross-check", exp_chart},
      {"non-vacuity under coframe tampering", non_vacuity},
      {"report determinism", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << index << "] " << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}

#pragma once

// Registry of named identity checks and the runner that evaluates them over seeded
// sample points of a model.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hflat/catalog.hpp"
#include "hflat/geometry.hpp"

namespace hflat {

enum class Applicability {
  AnyMetric,
  SurfaceOnly,
  ChernFlat,
  RiemannFlat,
  BismutFlat,
  /// Bismut flat and in a holomorphic chart (finite differences in z).
  BismutFlatHolomorphic,
  Kahler,
  ReferenceTorsion,
  ReferenceRiemannian,
  LieAlgebraic,
};

enum class ResidualKind {
  /// Passes when the largest residual is at most the tolerance.
  MaxAbs,
  /// Passes when the smallest value exceeds -tolerance.
  MinEigenvalue,
};

struct CheckContext {
  const HermitianModel& model;
  const ChartPoint& point;
  PointGeometry& geo;
  /// Finite-difference complex Hessian of |T|^2, shared by the two plurisubharmonicity checks.
  std::optional<std::vector<cplx>> psh_difference;
};

struct CheckDescriptor {
  std::string id;
  std::string statement;
  Applicability applicability = Applicability::AnyMetric;
  double tolerance = 1e-8;
  ResidualKind kind = ResidualKind::MaxAbs;
  /// Jet order of the point geometry the check needs.
  int order = 1;
  std::function<double(CheckContext&)> eval;
};

const std::vector<CheckDescriptor>& check_registry();
/// Throws std::invalid_argument for an unknown id.
const CheckDescriptor& find_check(const std::string& id);
/// Empty when applicable, otherwise the reason.
std::string inapplicable_reason(const CheckDescriptor& c, const HermitianModel& m);
std::string applicability_name(Applicability a);
std::string kind_name(ResidualKind k);

struct SuiteOptions {
  /// Empty selects every applicable check.
  std::vector<std::string> checks;
  std::uint64_t seed = 42;
  int count = 100;
  std::map<std::string, double> tolerances;
  bool parallel = true;
};

struct CheckResult {
  std::string id;
  std::string statement;
  ResidualKind kind = ResidualKind::MaxAbs;
  double tolerance = 0.0;
  /// Largest residual (MaxAbs) or smallest value (MinEigenvalue) over the points.
  double residual = 0.0;
  int point_index = 0;
  bool pass = false;
};

struct VerificationReport {
  std::string model;
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<ChartPoint> points;
  std::vector<CheckResult> results;
  double wall_time = 0.0;

  bool passed() const;
};

/// `count` domain points; attempt a draws from SplitMix64::stream(seed, a). Throws
/// SamplingError after 10 * count attempts.
std::vector<ChartPoint> sample_points(const HermitianModel& m, std::uint64_t seed, int count);

/// Resolves the check list (explicit ids must be applicable, else ApplicabilityError).
std::vector<const CheckDescriptor*> select_checks(const HermitianModel& m, const std::vector<std::string>& ids);

/// Residual of every selected check at one point.
std::vector<double> evaluate_point(const HermitianModel& m, const ChartPoint& p,
                                   const std::vector<const CheckDescriptor*>& checks);

/// Evaluates the checks at every point. Errors at a point are rethrown with the point
/// attached; with several failing points the lowest index wins.
VerificationReport run_suite(const HermitianModel& m, const SuiteOptions& opt);

nlohmann::ordered_json report_json(const VerificationReport& r, bool include_timing);

std::string format_point(const ChartPoint& p);

}  // namespace hflat

#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "hflat/catalog.hpp"
#include "hflat/errors.hpp"
#include "hflat/spec_file.hpp"
#include "hflat/suite.hpp"

using namespace hflat;

namespace {

const CheckResult& result(const VerificationReport& r, const std::string& id) {
  for (const auto& c : r.results)
    if (c.id == id) return c;
  FAIL("no result for " << id);
  throw std::logic_error("unreachable");
}

VerificationReport run(const std::string& ref, int count, std::vector<std::string> checks = {}, bool parallel = true) {
  SuiteOptions o;
  o.count = count;
  o.checks = std::move(checks);
  o.parallel = parallel;
  return run_suite(model_by_name(ref), o);
}

}  // namespace

TEST_CASE("registry ids are unique with positive tolerances") {
  std::set<std::string> ids;
  for (const auto& c : check_registry()) {
    CHECK(ids.insert(c.id).second);
    CHECK(c.tolerance > 0.0);
    CHECK(c.order >= 1);
    CHECK(c.order <= 3);
    CHECK_FALSE(c.statement.empty());
  }
  CHECK_THROWS_AS(find_check("no-such-check"), std::invalid_argument);
}

TEST_CASE("every check applies to some model of the default plan") {
  const char* plan[] = {"hopf", "euclidean", "boothby:f=z1*z2,h=z1", "g1", "perturbed:seed=1,eps=0.1,dim=3",
                        "lie:algebra=su2+su2,structure=central-ce"};
  std::set<std::string> covered;
  for (const char* ref : plan)
    for (const auto* c : select_checks(model_by_name(ref), {})) covered.insert(c->id);
  for (const auto& c : check_registry()) CHECK_MESSAGE(covered.count(c.id), c.id);
}

TEST_CASE("hopf passes the full applicable suite") {
  const auto r = run("hopf", 100);
  CHECK(r.passed());
  CHECK(r.results.size() == select_checks(model_by_name("hopf"), {}).size());
  for (const auto& c : r.results)
    if (c.tolerance <= 1e-8) CHECK_MESSAGE(std::abs(c.residual) < 1e-8, c.id);
  CHECK(result(r, "bismut-curvature-zero").residual < 1e-12);
}

TEST_CASE("euclidean residuals vanish") {
  for (const char* ref : {"euclidean:dim=1", "euclidean:dim=2", "euclidean:dim=3"}) {
    const auto r = run(ref, 20);
    CHECK(r.passed());
    for (const auto& c : r.results) CHECK_MESSAGE(std::abs(c.residual) < 1e-12, c.id);
  }
}

TEST_CASE("inapplicable checks are rejected") {
  const auto boothby = model_by_name("boothby:f=z2,h=0");
  CHECK_THROWS_AS(select_checks(boothby, {"bismut-curvature-zero"}), ApplicabilityError);
  CHECK_NOTHROW(select_checks(boothby, {"chern-curvature-zero"}));
  CHECK_THROWS_AS(select_checks(model_by_name("euclidean:dim=3"), {"n2-eta-relation"}), ApplicabilityError);
  CHECK_THROWS_AS(select_checks(model_by_name("hopf"), {"lie-samelson"}), ApplicabilityError);
  CHECK_THROWS_AS(select_checks(model_by_name("hopf"), {"gray-02", "gray-02"}), std::invalid_argument);

  // Default selection silently omits them.
  for (const auto* c : select_checks(boothby, {})) CHECK(c->id != "bismut-curvature-zero");
}

TEST_CASE("serial and parallel runs give identical reports") {
  SuiteOptions o;
  o.seed = 7;
  o.count = 60;
  const auto m = model_by_name("perturbed:seed=4,eps=0.15,dim=2");
  const auto par = report_json(run_suite(m, o), false).dump(2);
  o.parallel = false;
  const auto ser = report_json(run_suite(m, o), false).dump(2);
  CHECK(par == ser);
  o.parallel = true;
  CHECK(report_json(run_suite(m, o), false).dump(2) == par);
}

TEST_CASE("report json layout") {
  SuiteOptions o;
  o.count = 5;
  o.checks = {"torsion-norm-8x", "bismut-psh-eigen"};
  const auto r = run_suite(model_by_name("hopf"), o);
  const auto j = report_json(r, false);
  CHECK(j["schema"] == 1);
  CHECK(j["model"] == "hopf");
  CHECK(j["seed"] == 42);
  CHECK(j["points"] == 5);
  CHECK(j["passed"] == true);
  CHECK_FALSE(j.contains("wall_time_seconds"));
  CHECK(report_json(r, true).contains("wall_time_seconds"));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j["checks"].items()) keys.push_back(k);
  CHECK(keys == o.checks);
  const auto& e = j["checks"]["bismut-psh-eigen"];
  CHECK(e["kind"] == "min-eigenvalue");
  CHECK(e["point"].size() == 2);
  CHECK(e["point"][0].size() == 2);
  // The argmax point is reproducible from the sampled list.
  const int idx = e["point_index"];
  CHECK(e["point"][0][0] == r.points[idx].coords[0].real());
}

TEST_CASE("tolerance overrides") {
  SuiteOptions o;
  o.count = 10;
  o.checks = {"torsion-norm-24x"};
  o.tolerances["torsion-norm-24x"] = 1e-30;
  const auto r = run_suite(model_by_name("hopf"), o);
  CHECK(result(r, "torsion-norm-24x").tolerance == 1e-30);
  CHECK_FALSE(r.passed());
  o.tolerances = {{"not-a-check", 1.0}};
  CHECK_THROWS_AS(run_suite(model_by_name("hopf"), o), std::invalid_argument);
  o.tolerances = {{"torsion-norm-24x", -1.0}};
  CHECK_THROWS_AS(run_suite(model_by_name("hopf"), o), std::invalid_argument);
}

TEST_CASE("tampered hopf coframe is caught") {
  SuiteOptions o;
  o.count = 200;
  o.checks = {"bismut-curvature-zero", "chern-bianchi-curvature", "riem-i-jbar-k-lbar"};
  const auto r = run_suite(testing::tampered_hopf(1e-3), o);
  CHECK_FALSE(r.passed());
  CHECK(result(r, "bismut-curvature-zero").residual > 1e-5);
  // Identities valid for every metric are unaffected.
  CHECK(result(r, "chern-bianchi-curvature").pass);
  CHECK(result(r, "riem-i-jbar-k-lbar").pass);
}

TEST_CASE("sampling failure and per-point errors") {
  HermitianModel m = euclidean(2);
  m.in_domain = [](const ChartPoint& p) { return std::abs(p.coords[0]) > 0.999; };
  SuiteOptions o;
  o.count = 10;
  CHECK_THROWS_AS(run_suite(m, o), SamplingError);
  CHECK_THROWS_AS(sample_points(model_by_name("hopf"), 1, 0), std::invalid_argument);

  const auto bad = parse_model_spec("dim = 2\ncoframe:\n  1, 0, 0, 0\n  z2, 0, 0, 0\nend\n", "rank.spec");
  try {
    run_suite(bad, o);
    FAIL("expected a singular coframe error");
  } catch (const SingularCoframeError& e) {
    CHECK(std::string(e.what()).find("at point 0 (") != std::string::npos);
  }
}

TEST_CASE("sample points are seeded and inside the domain") {
  const auto m = model_by_name("hopf");
  const auto a = sample_points(m, 3, 50), b = sample_points(m, 3, 50), c = sample_points(m, 4, 50);
  CHECK(a.size() == 50);
  bool same = true, differ = false;
  for (int i = 0; i < 50; ++i) {
    same = same && a[i].coords == b[i].coords;
    differ = differ || a[i].coords != c[i].coords;
    const double r = std::sqrt(std::norm(a[i].coords[0]) + std::norm(a[i].coords[1]));
    CHECK(r > 0.5);
    CHECK(r < 2.0);
  }
  CHECK(same);
  CHECK(differ);
}

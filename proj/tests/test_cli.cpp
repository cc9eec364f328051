#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hflat/cli.hpp"

using namespace hflat;

namespace {

const std::filesystem::path kSource = HFLAT_SOURCE_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Compares against tests/golden/<name>; HFLAT_UPDATE_GOLDEN=1 rewrites the file instead.
void golden(const std::string& name, const std::string& actual) {
  const auto path = kSource / "tests" / "golden" / name;
  if (const char* u = std::getenv("HFLAT_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  REQUIRE_MESSAGE(std::filesystem::exists(path), "missing golden file " << path);
  CHECK_MESSAGE(slurp(path) == actual, "golden mismatch for " << name);
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::string spec(const std::string& name) { return (kSource / "specs" / name).string(); }

}  // namespace

TEST_CASE("verify exit codes") {
  CHECK(cli({"verify", "--model", "hopf", "--points", "200", "--seed", "7"}).code == 0);
  CHECK(cli({"verify", "--model", "boothby:f=z2,h=0", "--suite", "chern-curvature-zero"}).code == 0);
  const auto failing =
      cli({"verify", "--model", "hopf", "--suite", "torsion-norm-24x", "--tol", "torsion-norm-24x=1e-30"});
  CHECK(failing.code == 1);
  CHECK(contains(failing.out, "FAIL"));

  const auto inapplicable = cli({"verify", "--model", "boothby:f=z2,h=0", "--suite", "bismut-curvature-zero"});
  CHECK(inapplicable.code == 2);
  CHECK(contains(inapplicable.err, "Bismut-flat"));

  const auto singular = cli({"verify", "--spec", spec("rank_deficient.spec")});
  CHECK(singular.code == 2);
  CHECK(contains(singular.err, "degenerate"));
  CHECK(contains(singular.err, "at point 0 ("));

  const auto syntax = cli({"verify", "--spec", spec("broken_syntax.spec")});
  CHECK(syntax.code == 2);
  CHECK(contains(syntax.err, "broken_syntax.spec:4:14:"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"verify"}).code == 2);
  CHECK(cli({"verify", "--model", "hopf", "--spec", spec("hopf.spec")}).code == 2);
  CHECK(cli({"verify", "--model", "nosuch"}).code == 2);
  CHECK(cli({"verify", "--model", "hopf", "--points", "0"}).code == 2);
  CHECK(cli({"verify", "--model", "hopf", "--tol", "gray-02"}).code == 2);
  CHECK(cli({"verify", "--model", "hopf", "--tol", "gray-02=small"}).code == 2);
  CHECK(cli({"verify", "--model", "hopf", "--suite", "no-such-check"}).code == 2);
  CHECK(cli({"eval", "--model", "hopf", "--at", "1,0", "--show", "nothing"}).code == 2);
  CHECK(cli({"eval", "--model", "hopf", "--at", "1+,0"}).code == 2);
  CHECK(cli({"eval", "--model", "hopf", "--at", "1"}).code == 2);
  CHECK(cli({"lie", "--algebra", "su3", "check-bismut"}).code == 2);
  CHECK(cli({"lie", "--algebra", "su2+su2", "--structure", "odd", "check-bismut"}).code == 2);
  CHECK(cli({"lie", "--algebra", "su2+su2"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("reports are byte-identical across runs and thread modes") {
  const auto dir = std::filesystem::temp_directory_path() / "hflat_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = (dir / "a.json").string(), b = (dir / "b.json").string(), c = (dir / "c.json").string();
  CHECK(cli({"verify", "--model", "hopf", "--seed", "7", "--points", "100", "--out", a}).code == 0);
  CHECK(cli({"verify", "--model", "hopf", "--seed", "7", "--points", "100", "--out", b}).code == 0);
  CHECK(cli({"verify", "--model", "hopf", "--seed", "7", "--points", "100", "--out", c, "--serial"}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  CHECK(cli({"verify", "--model", "hopf", "--points", "3", "--out", a, "--timing"}).code == 0);
  CHECK(contains(slurp(a), "wall_time_seconds"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("eval matches known tensor values") {
  const auto hopf = cli({"eval", "--model", "hopf", "--at", "1,0", "--show", "torsion"});
  CHECK(hopf.code == 0);
  CHECK(contains(hopf.out, "T^1_12 = 0\n"));
  CHECK(contains(hopf.out, "T^2_12 = -0.5\n"));
  const auto ccf = cli({"eval", "--model", "complete-chern-flat", "--at", "1,1", "--show", "torsion"});
  CHECK(contains(ccf.out, "T^2_12 = 1\n"));
  const auto outside = cli({"eval", "--model", "hopf", "--at", "0,0"});
  CHECK(outside.code == 2);
  CHECK(contains(outside.err, "outside the domain"));
}

TEST_CASE("lie subcommands") {
  CHECK(cli({"lie", "--algebra", "su2+su2", "--structure", "central-ce", "check-bismut"}).code == 0);
  CHECK(cli({"lie", "--algebra", "su2+r", "check-integrability"}).code == 0);
  CHECK(cli({"lie", "--algebra", "su2+su2", "--structure", "nonintegrable", "check-integrability"}).code == 1);
  CHECK(cli({"lie", "--algebra", "su2+su2", "--structure", "nonintegrable", "check-bismut"}).code == 2);
  const auto exp = cli({"lie", "--algebra", "su2+su2", "exp-chart-verify", "--radius", "0.5", "--K", "20"});
  CHECK(exp.code == 0);
  CHECK(contains(exp.out, "max |Bismut curvature|"));
}

TEST_CASE("golden: JSON report") {
  const auto r = cli({"verify", "--model", "hopf", "--points", "4", "--seed", "3", "--suite",
                      "torsion-norm-8x,n2-eta-relation,bismut-curvature-zero,balanced-implies-kahler", "--out", "-"});
  CHECK(r.code == 0);
  golden("verify_hopf.json", r.out);
}

TEST_CASE("golden: verify text output from a spec file") {
  const auto r = cli({"verify", "--spec", spec("boothby_builtin.spec"), "--points", "5", "--suite",
                      "chern-curvature-zero,reference-torsion,torsion-norm-8x"});
  CHECK(r.code == 0);
  golden("verify_boothby_spec.txt", r.out);
  const auto coframe = cli({"verify", "--spec", spec("hopf.spec"), "--points", "5", "--suite",
                            "bismut-curvature-zero,torsion-norm-8x,bismut-psh"});
  CHECK(coframe.code == 0);
  golden("verify_hopf_spec.txt", coframe.out);
}

TEST_CASE("golden: eval output") {
  const auto r = cli({"eval", "--model", "complete-chern-flat", "--at", "0.5+0.25i,-1", "--show",
                      "metric,torsion,eta,theta,curvature:chern"});
  CHECK(r.code == 0);
  golden("eval_complete_chern_flat.txt", r.out);
}

TEST_CASE("golden: lie reports and catalog listing") {
  golden("lie_check_bismut.txt",
         cli({"lie", "--algebra", "su2+su2", "--structure", "central-ce", "check-bismut"}).out);
  golden("catalog.txt", cli({"catalog"}).out);
}

#include "hflat/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "hflat/catalog.hpp"
#include "hflat/errors.hpp"
#include "hflat/expr.hpp"
#include "hflat/lie.hpp"
#include "hflat/spec_file.hpp"
#include "hflat/suite.hpp"

namespace hflat {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string num(cplx z) {
  if (z.imag() == 0.0) return num(z.real());
  if (z.real() == 0.0) return num(z.imag()) + "i";
  const std::string im = num(z.imag());
  return num(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- eval ----

std::string slot_name(int slot, int n) {
  return slot < n ? "phi_" + std::to_string(slot + 1) : "phibar_" + std::to_string(slot - n + 1);
}

std::string form_text(const FormValue& f) {
  std::string s;
  const int n = f.dim();
  for (const auto& [mask, c] : f.terms()) {
    if (c == cplx(0.0)) continue;
    std::string basis;
    for (int b = 0; b < 2 * n; ++b)
      if (mask >> b & 1) basis += (basis.empty() ? "" : "^") + slot_name(b, n);
    s += (s.empty() ? "" : " + ") + ("(" + num(c) + ") " + basis);
  }
  return s.empty() ? "0" : s;
}

void print_matrix(std::ostream& out, const std::string& label, const JetMatrix& m) {
  out << label << "\n";
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out << "  " << label << "_" << i + 1 << j + 1 << " = " << form_text(form_value(m(i, j))) << "\n";
}

std::string index_name(int l, int n) { return l < n ? std::to_string(l + 1) : std::to_string(l - n + 1) + "bar"; }

int show_order(const std::string& item) {
  if (item.rfind("curvature:", 0) == 0 || item.rfind("covderiv:", 0) == 0) return 2;
  return 1;
}

void show(std::ostream& out, PointGeometry& g, const std::string& item) {
  const int n = g.dim();
  if (item == "metric") {
    const auto m = g.metric_matrix();
    out << "metric\n";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out << "  g_" << i + 1 << "," << j + 1 << "bar = " << num(m[static_cast<std::size_t>(i) * n + j]) << "\n";
  } else if (item == "torsion") {
    out << "torsion\n";
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          out << "  T^" << k + 1 << "_" << i + 1 << j + 1 << " = " << num(g.T(k, i, j)) << "\n";
    out << "  |T|^2 = " << num(g.torsion_norm2()) << "\n";
  } else if (item == "eta") {
    out << "eta\n";
    const auto e = g.eta_components();
    for (int j = 0; j < n; ++j) out << "  eta_" << j + 1 << " = " << num(e[j].value()) << "\n";
  } else if (item == "theta") {
    print_matrix(out, "theta", g.theta());
  } else if (item == "theta1") {
    print_matrix(out, "theta1", g.theta1());
  } else if (item == "theta2") {
    print_matrix(out, "theta2", g.theta2());
  } else if (item == "thetaB") {
    print_matrix(out, "thetaB", g.thetaB());
  } else if (item == "curvature:chern") {
    print_matrix(out, "Theta", g.chern_curvature());
  } else if (item == "curvature:riem") {
    print_matrix(out, "Theta1", g.riem_curvature1());
    print_matrix(out, "Theta2", g.riem_curvature2());
  } else if (item == "curvature:bismut") {
    print_matrix(out, "ThetaB", g.bismut_curvature());
  } else if (item == "covderiv:chern" || item == "covderiv:bismut") {
    const bool chern = item == "covderiv:chern";
    const auto d = g.torsion_derivative(chern ? ConnectionKind::Chern : ConnectionKind::Bismut);
    out << "torsion derivative (" << (chern ? "Chern" : "Bismut") << ")\n";
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int l = 0; l < 2 * n; ++l)
            out << "  T^" << k + 1 << "_" << i + 1 << j + 1 << "," << index_name(l, n) << " = " << num(d(k, i, j, l))
                << "\n";
  } else {
    throw UsageError("unknown --show item '" + item + "'");
  }
}

// ---- shared ----

HermitianModel resolve_model(const std::string& model, const std::string& spec) {
  if (model.empty() == spec.empty()) throw UsageError("give exactly one of --model and --spec");
  return spec.empty() ? model_by_name(model) : load_model_spec(spec);
}

void print_report_lines(std::ostream& out, const VerificationReport& r) {
  std::size_t width = 0;
  for (const auto& c : r.results) width = std::max(width, c.id.size());
  for (const auto& c : r.results) {
    out << c.id << std::string(width - c.id.size() + 2, ' ') << sci(c.residual) << "  " << (c.pass ? "PASS" : "FAIL");
    if (!c.pass) out << "  (tolerance " << sci(c.tolerance) << ", point " << c.point_index << ")";
    out << "\n";
  }
  out << (r.passed() ? "all checks passed" : "some checks FAILED") << "\n";
}

}  // namespace

std::vector<cplx> parse_point_literal(const std::string& text) {
  std::vector<cplx> out;
  for (const auto& item : split_list(text)) out.push_back(eval_value(parse_expr(item, 0), {}));
  if (out.empty()) throw UsageError("empty point");
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermitian geometry identity verifier", "hflat"};
  app.require_subcommand(1);

  std::string model, spec, suite, out_path, at = "", show_list = "torsion";
  std::vector<std::string> tol;
  int points = 100;
  std::uint64_t seed = 42;
  bool serial = false, timing = false;

  auto* verify = app.add_subcommand("verify", "run identity checks at seeded sample points");
  verify->add_option("--model", model, "catalog reference, e.g. hopf:c=2 or hopf;euclidean:dim=1");
  verify->add_option("--spec", spec, "model-spec file");
  verify->add_option("--suite", suite, "comma-separated check ids (default: all applicable)");
  verify->add_option("--points", points, "number of sample points")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "sampling seed");
  verify->add_option("--tol", tol, "tolerance override id=value (repeatable)");
  verify->add_option("--out", out_path, "write the JSON report here ('-' for stdout)");
  verify->add_flag("--serial", serial, "evaluate points on one thread");
  verify->add_flag("--timing", timing, "include wall time in the JSON report");

  auto* eval = app.add_subcommand("eval", "print tensors at one point");
  eval->add_option("--model", model, "catalog reference");
  eval->add_option("--spec", spec, "model-spec file");
  eval->add_option("--at", at, "point as comma-separated complex literals, e.g. \"1+0.5i,0\"")->required();
  eval->add_option("--show", show_list,
                   "comma-separated: metric, torsion, eta, theta, theta1, theta2, thetaB, "
                   "curvature:{chern|riem|bismut}, covderiv:{chern|bismut}");

  std::string algebra, structure = "standard";
  double radius = 0.5;
  int K = 20, lie_points = 25;
  auto* lie = app.add_subcommand("lie", "Lie algebra structures and their exponential charts");
  lie->add_option("--algebra", algebra, "algebra name (see catalog)")->required();
  lie->add_option("--structure", structure, "complex structure id");
  lie->require_subcommand(1);
  auto* lie_int = lie->add_subcommand("check-integrability", "integrability and Samelson conditions");
  auto* lie_bis = lie->add_subcommand("check-bismut", "algebraic Bismut connection in the left-invariant frame");
  auto* lie_exp = lie->add_subcommand("exp-chart-verify", "Bismut curvature in truncated exponential coordinates");
  lie_exp->add_option("--radius", radius, "chart radius")->check(CLI::PositiveNumber);
  lie_exp->add_option("--K", K, "Maurer-Cartan series terms")->check(CLI::PositiveNumber);
  lie_exp->add_option("--points", lie_points, "number of sample points")->check(CLI::PositiveNumber);
  lie_exp->add_option("--seed", seed, "sampling seed");

  auto* catalog = app.add_subcommand("catalog", "list models, Lie algebras and checks");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*verify) {
      const HermitianModel m = resolve_model(model, spec);
      SuiteOptions opt;
      opt.checks = split_list(suite);
      opt.seed = seed;
      opt.count = points;
      opt.parallel = !serial;
      for (const auto& t : tol) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw UsageError("--tol expects id=value, got '" + t + "'");
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(t.substr(eq + 1), &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != t.size() - eq - 1) throw UsageError("--tol value is not a number: '" + t + "'");
        opt.tolerances[t.substr(0, eq)] = v;
      }
      const auto report = run_suite(m, opt);
      const std::string json = report_json(report, timing).dump(2) + "\n";
      if (out_path == "-") {
        out << json;
      } else {
        out << "model " << report.model << "  seed " << report.seed << "  points " << report.count << "\n";
        print_report_lines(out, report);
        if (!out_path.empty()) {
          std::ofstream f(out_path, std::ios::binary);
          if (!f) throw Error("cannot write " + out_path);
          f << json;
        }
      }
      return report.passed() ? 0 : 1;
    }

    if (*eval) {
      const HermitianModel m = resolve_model(model, spec);
      ChartPoint p{parse_point_literal(at)};
      const auto items = split_list(show_list);
      int order = 1;
      for (const auto& i : items) order = std::max(order, show_order(i));
      PointGeometry g = m.geometry(p, order);
      out << "model " << m.name << "\npoint " << format_point(p) << "\n";
      for (const auto& i : items) show(out, g, i);
      return 0;
    }

    if (*lie) {
      const LieAlgebra a = lie_algebra(algebra);
      const ComplexStructure J = named_structure(a, structure);
      constexpr double tol12 = 1e-12;
      auto line = [&](const std::string& what, double r, double t) {
        out << what << std::string(what.size() < 26 ? 26 - what.size() : 1, ' ') << sci(r) << "  "
            << (r <= t ? "PASS" : "FAIL") << "\n";
        return r <= t;
      };
      out << "algebra " << a.name << "  structure " << structure << "\n";
      if (*lie_int) {
        const auto s = samelson_conditions(a, J);
        bool ok = line("integrability", integrability_residual(a, J), tol12);
        ok = line("J^2 + I", square_residual(J), tol12) && ok;
        ok = line("J orthogonal", orthogonality_residual(a, J), tol12) && ok;
        ok = line("eigenspace isotropy", s.isotropy, tol12) && ok;
        ok = line("eigenspace closure", s.closure, tol12) && ok;
        out << "eigenspace span rank" << std::string(6, ' ') << s.span_rank << " of " << s.dim << "  "
            << (s.span_rank == s.dim ? "PASS" : "FAIL") << "\n";
        return ok && s.span_rank == s.dim ? 0 : 1;
      }
      if (*lie_bis) {
        const auto r = algebraic_bismut_check(a, J);
        bool ok = line("ad skew", r.ad_skew, tol12);
        ok = line("integrability", r.integrability, tol12) && ok;
        ok = line("torsion vs structure", r.torsion_vs_structure, tol12) && ok;
        ok = line("Bismut coefficients", r.bismut_coefficients, tol12) && ok;
        ok = line("torsion Jacobi", r.torsion_jacobi, tol12) && ok;
        ok = line("torsion dbar quadratic", r.dbar_quadratic, tol12) && ok;
        out << "|T|^2" << std::string(21, ' ') << num(r.torsion_norm2) << "\nkahler" << std::string(20, ' ')
            << (r.kahler ? "yes" : "no") << "\n";
        return ok ? 0 : 1;
      }
      const HermitianModel m = lie_group_model(a, J, structure, K, radius);
      SuiteOptions opt;
      opt.checks = {"bismut-curvature-zero"};
      opt.tolerances["bismut-curvature-zero"] = 1e-6;
      opt.seed = seed;
      opt.count = lie_points;
      const auto report = run_suite(m, opt);
      double bound = 0.0;
      for (const auto& p : report.points) {
        std::vector<double> x(a.dim);
        const int n = a.dim / 2;
        for (int i = 0; i < n; ++i) {
          x[i] = p.coords[i].real();
          x[n + i] = p.coords[i].imag();
        }
        bound = std::max(bound, truncation_bound(a, x, K));
      }
      out << "chart K " << K << "  radius " << num(radius) << "  points " << lie_points << "  seed " << seed << "\n";
      out << "max truncation bound      " << sci(bound) << "\n";
      const auto& r = report.results.front();
      return line("max |Bismut curvature|", r.residual, r.tolerance) ? 0 : 1;
    }

    if (*catalog) {
      out << "models\n";
      for (const auto& [k, v] : catalog_listing()) out << "  " << k << "\n      " << v << "\n";
      out << "lie algebras\n";
      for (const auto& [k, v] : lie_listing()) out << "  " << k << "\n      " << v << "\n";
      out << "checks\n";
      for (const auto& c : check_registry())
        out << "  " << c.id << "  [" << applicability_name(c.applicability) << ", tol " << sci(c.tolerance) << ", "
            << kind_name(c.kind) << "]\n      " << c.statement << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace hflat

// Textual model references: "name" or "name:key=value,...", products joined by ';'.

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "hflat/catalog.hpp"
#include "hflat/lie.hpp"

namespace hflat {

namespace {

struct Ref {
  std::string name;
  std::map<std::string, std::string> params;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

Ref parse_ref(const std::string& text) {
  Ref r;
  const auto colon = text.find(':');
  r.name = trim(text.substr(0, colon));
  if (colon == std::string::npos) return r;
  std::string rest = text.substr(colon + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("model parameter '" + item + "' is not key=value");
    const std::string key = trim(item.substr(0, eq));
    if (r.params.count(key)) throw std::invalid_argument("model parameter '" + key + "' given twice");
    r.params[key] = trim(item.substr(eq + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return r;
}

void allow_only(const Ref& r, std::set<std::string> keys) {
  for (const auto& [k, v] : r.params)
    if (!keys.count(k)) throw std::invalid_argument("model '" + r.name + "' has no parameter '" + k + "'");
}

std::string get(const Ref& r, const std::string& key, const std::string& fallback) {
  const auto it = r.params.find(key);
  return it == r.params.end() ? fallback : it->second;
}

double number(const Ref& r, const std::string& key, double fallback) {
  const auto it = r.params.find(key);
  if (it == r.params.end()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size())
    throw std::invalid_argument("parameter " + key + " of '" + r.name + "' is not a number: '" + it->second + "'");
  return v;
}

long integer(const Ref& r, const std::string& key, long fallback) {
  const double v = number(r, key, static_cast<double>(fallback));
  if (v != std::floor(v)) throw std::invalid_argument("parameter " + key + " of '" + r.name + "' must be an integer");
  return static_cast<long>(v);
}

HermitianModel single(const std::string& text) {
  const Ref r = parse_ref(text);
  if (r.name == "euclidean") {
    allow_only(r, {"dim"});
    return euclidean(static_cast<int>(integer(r, "dim", 2)));
  }
  if (r.name == "hopf") {
    allow_only(r, {"c"});
    return hopf_surface(number(r, "c", 1.0));
  }
  if (r.name == "boothby") {
    allow_only(r, {"f", "h"});
    const std::string f = get(r, "f", "0"), h = get(r, "h", "0");
    return boothby(parse_expr(f, 2), parse_expr(h, 2), f, h);
  }
  if (r.name == "complete-chern-flat") {
    allow_only(r, {});
    return complete_chern_flat();
  }
  if (r.name == "g1" || r.name == "g2") {
    allow_only(r, {});
    return r.name == "g1" ? triple_g1() : triple_g2();
  }
  if (r.name == "triple") {
    allow_only(r, {"u", "v", "f", "scale"});
    const std::string u = get(r, "u", "z1"), v = get(r, "v", "z2"), f = get(r, "f", "0");
    return riemann_flat_triple(parse_expr(u, 2), parse_expr(v, 2), parse_expr(f, 2), number(r, "scale", 1.0),
                               "triple:u=" + u + ",v=" + v + ",f=" + f);
  }
  if (r.name == "perturbed") {
    allow_only(r, {"seed", "eps", "dim"});
    const long seed = integer(r, "seed", 1);
    if (seed < 0) throw std::invalid_argument("perturbed seed must be nonnegative");
    return perturbed_metric(static_cast<std::uint64_t>(seed), number(r, "eps", 0.1), static_cast<int>(integer(r, "dim", 2)));
  }
  if (r.name == "lie") {
    allow_only(r, {"algebra", "structure", "K", "radius", "a", "b"});
    const auto alg = lie_algebra(get(r, "algebra", "su2+su2"));
    std::string st = get(r, "structure", "standard");
    // Structure parameters cannot nest inside the comma list, so a and b sit at top level.
    if (r.params.count("a") || r.params.count("b")) st += ":a=" + get(r, "a", "") + ",b=" + get(r, "b", "");
    return lie_group_model(alg, named_structure(alg, st), st, static_cast<int>(integer(r, "K", 20)),
                           number(r, "radius", 0.5));
  }
  throw std::invalid_argument("unknown model '" + r.name + "'");
}

}  // namespace

HermitianModel model_by_name(const std::string& ref) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto semi = ref.find(';', start);
    parts.push_back(ref.substr(start, semi == std::string::npos ? std::string::npos : semi - start));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  HermitianModel m = single(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) m = product(m, single(parts[i]));
  return m;
}

std::vector<std::pair<std::string, std::string>> catalog_listing() {
  return {
      {"euclidean:dim=N", "flat C^N, N = 1..4"},
      {"hopf[:c=C]", "Hopf surface sqrt(c) dz / |z| on C^2 minus the origin; Bismut flat"},
      {"boothby:f=F,h=H", "e^f dz1, e^h dz2 for holomorphic f, h; Chern flat"},
      {"complete-chern-flat", "dx, dy - 2xy dx on C^2; Chern flat and complete"},
      {"g1", "Riemannian-flat surface from (z1, 0, z2) on C* x C"},
      {"g2", "Riemannian-flat surface from (z1, z2, i z1 z2) away from |z2| = 1"},
      {"triple:u=U,v=V,f=F[,scale=S]", "Riemannian-flat surface from holomorphic u, v, f"},
      {"perturbed:seed=S,eps=E,dim=N", "I + eps H(z, zbar) with seeded quadratic H, eps < 0.2"},
      {"lie:algebra=A,structure=S[,a=..,b=..][,K=20][,radius=0.5]", "left-invariant structure in exponential coordinates"},
      {"A;B", "product of two models on disjoint coordinate blocks"},
  };
}

}  // namespace hflat

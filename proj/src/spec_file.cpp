#include "hflat/spec_file.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "hflat/errors.hpp"
#include "hflat/expr.hpp"

namespace hflat {

namespace {

struct Located {
  std::string text;
  std::size_t offset = 0;  // byte offset of text[0] in the file
  int line = 0;
  int column = 0;
};

class SpecParser {
 public:
  SpecParser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what, offset);
  }

  Expr expression(const Located& v, int dim) const {
    try {
      return parse_expr(v.text, dim);
    } catch (const ParseError& e) {
      std::string msg = e.what();
      if (const auto at = msg.rfind(" at offset "); at != std::string::npos) msg.resize(at);
      fail(msg, v.offset + e.offset());
    }
  }

  /// Splits into lines with comments removed and whitespace trimmed, keeping offsets.
  std::vector<Located> lines() const {
    std::vector<Located> out;
    std::size_t start = 0;
    int number = 1;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(start, end - start);
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      const auto b = raw.find_first_not_of(" \t\r");
      if (b != std::string_view::npos) {
        const auto e = raw.find_last_not_of(" \t\r");
        out.push_back({std::string(raw.substr(b, e - b + 1)), start + b, number, static_cast<int>(b) + 1});
      }
      if (end == text_.size()) break;
      start = end + 1;
      ++number;
    }
    return out;
  }

  static std::vector<Located> split(const Located& l, char sep) {
    std::vector<Located> out;
    std::size_t start = 0;
    for (;;) {
      const auto pos = l.text.find(sep, start);
      const std::string piece = l.text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
      const auto b = piece.find_first_not_of(" \t");
      const auto e = piece.find_last_not_of(" \t");
      Located item{b == std::string::npos ? "" : piece.substr(b, e - b + 1),
                   l.offset + start + (b == std::string::npos ? 0 : b), l.line, 0};
      out.push_back(item);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  }

  HermitianModel parse() {
    const auto ls = lines();
    std::optional<Located> name, dim, builtin, domain, radius, flags;
    std::vector<Located> rows;
    bool have_coframe = false;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const auto& l = ls[i];
      if (l.text == "coframe:") {
        if (have_coframe) fail("second coframe block", l.offset);
        have_coframe = true;
        for (++i; i < ls.size() && ls[i].text != "end"; ++i) rows.push_back(ls[i]);
        if (i == ls.size()) fail("coframe block has no closing 'end'", l.offset);
        continue;
      }
      const auto eq = l.text.find('=');
      if (eq == std::string::npos) fail("expected 'key = value' or 'coframe:'", l.offset);
      std::string key = l.text.substr(0, eq);
      key.erase(key.find_last_not_of(" \t") + 1);
      const auto vstart = l.text.find_first_not_of(" \t", eq + 1);
      if (vstart == std::string::npos) fail("empty value for '" + key + "'", l.offset + eq);
      const Located value{l.text.substr(vstart), l.offset + vstart, l.line, 0};
      std::optional<Located>* slot = key == "name"            ? &name
                                     : key == "dim"           ? &dim
                                     : key == "builtin"       ? &builtin
                                     : key == "domain"        ? &domain
                                     : key == "sample_radius" ? &radius
                                     : key == "flags"         ? &flags
                                                              : nullptr;
      if (!slot) fail("unknown key '" + key + "'", l.offset);
      if (slot->has_value()) fail("key '" + key + "' given twice", l.offset);
      *slot = value;
    }

    if (builtin) {
      if (have_coframe || domain || radius || flags)
        fail("builtin excludes coframe, domain, sample_radius and flags", builtin->offset);
      HermitianModel m = from_builtin(*builtin);
      if (dim && parse_int(*dim) != m.dim)
        fail("dim " + dim->text + " does not match builtin dimension " + std::to_string(m.dim), dim->offset);
      if (name) m.name = name->text;
      return m;
    }
    if (!dim) fail("missing 'dim'", text_.size());
    const int n = parse_int(*dim);
    if (n < 1 || n > 4) fail("dim must be 1..4", dim->offset);
    if (!have_coframe) fail("missing 'coframe:' block (or 'builtin')", text_.size());
    if (static_cast<int>(rows.size()) != n)
      fail("coframe has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(n),
           rows.empty() ? dim->offset : rows.back().offset);

    std::vector<Expr> entries;
    bool holomorphic = true;
    for (const auto& row : rows) {
      const auto cells = split(row, ',');
      if (static_cast<int>(cells.size()) != 2 * n)
        fail("coframe row has " + std::to_string(cells.size()) + " entries, expected " + std::to_string(2 * n),
             row.offset);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].text.empty()) fail("empty coframe entry", cells[c].offset);
        entries.push_back(expression(cells[c], n));
        if (static_cast<int>(c) >= n && !entries.back().is_zero_literal()) holomorphic = false;
      }
    }

    HermitianModel m;
    m.name = name ? name->text : source_stem();
    m.dim = n;
    m.holomorphic_chart = holomorphic;
    m.coframe = {n, [entries](std::span<const Jet> z) {
                   std::vector<Jet> c;
                   c.reserve(entries.size());
                   for (const auto& e : entries) c.push_back(eval_expr(e, z));
                   return c;
                 }};
    std::optional<Expr> pred;
    if (domain) pred = expression(*domain, n);
    m.in_domain = [entries, pred](const ChartPoint& p) {
      try {
        if (pred && !(eval_value(*pred, p.coords).real() > 0.0)) return false;
        for (const auto& e : entries) {
          const cplx v = eval_value(e, p.coords);
          if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        }
        return true;
      } catch (const Error&) {
        return false;
      }
    };
    const double r = radius ? parse_double(*radius) : 1.0;
    if (!(r > 0.0)) fail("sample_radius must be positive", radius->offset);
    m.sample = [n, r](SplitMix64& rng) { return sample_polydisc(rng, n, r); };
    if (flags)
      for (const auto& f : split(*flags, ',')) {
        if (f.text == "chern-flat") m.flags.chern_flat = true;
        else if (f.text == "riemann-flat") m.flags.riemann_flat = true;
        else if (f.text == "bismut-flat") m.flags.bismut_flat = true;
        else if (f.text == "kahler") m.flags.kahler = true;
        else fail("unknown flag '" + f.text + "'", f.offset);
      }
    return m;
  }

 private:
  int parse_int(const Located& v) const {
    std::size_t used = 0;
    int x = 0;
    try {
      x = std::stoi(v.text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.text.size()) fail("expected an integer, got '" + v.text + "'", v.offset);
    return x;
  }

  double parse_double(const Located& v) const {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(v.text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.text.size()) fail("expected a number, got '" + v.text + "'", v.offset);
    return x;
  }

  /// "hopf(c=2)" or "hopf" becomes the catalog reference "hopf:c=2".
  HermitianModel from_builtin(const Located& v) const {
    std::string ref = v.text;
    if (const auto open = ref.find('('); open != std::string::npos) {
      if (ref.back() != ')') fail("builtin arguments must end with ')'", v.offset + ref.size());
      const std::string args = ref.substr(open + 1, ref.size() - open - 2);
      ref = ref.substr(0, open) + (args.empty() ? "" : ":" + args);
    }
    try {
      return model_by_name(ref);
    } catch (const std::invalid_argument& e) {
      fail(e.what(), v.offset);
    }
  }

  std::string source_stem() const {
    const auto stem = std::filesystem::path(source_).stem().string();
    return stem.empty() ? "spec" : stem;
  }

  std::string_view text_;
  std::string source_;
};

}  // namespace

HermitianModel parse_model_spec(std::string_view text, const std::string& source) {
  return SpecParser(text, source).parse();
}

HermitianModel load_model_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read spec file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return parse_model_spec(text, path);
}

}  // namespace hflat

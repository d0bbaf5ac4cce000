#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "liesym/algcatalog.hpp"

namespace liesym::lie {

namespace {

int parse_index(const std::string& s, const text::Record& r, int line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size() || v < 1) r.fail("bad basis index '" + s + "'", line);
    return v - 1;
  } catch (const std::logic_error&) {
    r.fail("bad basis index '" + s + "'", line);
  }
}

// Values tried when searching for constraint-satisfying bindings.
const std::vector<Rational>& candidate_values() {
  static const std::vector<Rational> v = [] {
    std::vector<Rational> out;
    for (const char* s : {"1/3", "2/3", "-1/2", "3/4", "-2/3", "2", "1/5", "-3", "5/2", "1", "-1", "0", "-1/4", "3"})
      out.emplace_back(s);
    for (auto& r : out) r.canonicalize();
    return out;
  }();
  return v;
}

// Grid values for polynomial-identity certification; need not satisfy
// constraints.
const std::vector<Rational>& grid_values() {
  static const std::vector<Rational> v = [] {
    std::vector<Rational> out;
    for (const char* s : {"0", "1", "-1", "2", "-2", "1/2", "3", "-3", "1/3", "5", "-5", "7/2", "-7/3", "11"})
      out.emplace_back(s);
    for (auto& r : out) r.canonicalize();
    return out;
  }();
  return v;
}

std::string lower_normalized(const std::string& s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '+' || c == '(' || c == ')')
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void copy_into(StructureConstants& dst, const StructureConstants& src, const std::vector<int>& map) {
  for (int i = 0; i < src.dim(); ++i)
    for (int j = 0; j < src.dim(); ++j)
      for (int k = 0; k < src.dim(); ++k) {
        const Rational& c = src.at(i, j, k);
        if (c != 0)
          dst.at(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)], map[static_cast<std::size_t>(k)]) =
              c;
      }
}

}  // namespace

AlgebraEntry parse_algebra(const text::Record& r) {
  AlgebraEntry e;
  e.source = r.path;
  e.name = r.require("name");
  e.provenance = r.get("provenance").value_or("body");
  try {
    e.dim = std::stoi(r.require("dim"));
  } catch (const std::logic_error&) {
    r.fail("bad 'dim' line");
  }
  if (e.dim < 1 || e.dim > 8) r.fail("dimension must be between 1 and 8");

  for (const auto& l : r.lines) {
    if (l.key != "param") continue;
    e.context.declare("param " + l.value);
    const auto eq = l.value.find('=');
    const std::string pname = text::trim(l.value.substr(0, eq));
    e.param_order.push_back(pname);
    e.defaults[pname] = to_rational(e.context.params.at(pname));
  }

  for (const auto& l : r.lines) {
    try {
      if (l.key == "constraint") {
        for (const auto& part : text::split_top(l.value, ';'))
          if (!part.empty()) e.constraints.emplace_back(part, e.context);
      } else if (l.key == "bracket") {
        const auto arrow = l.value.find("->");
        if (arrow == std::string::npos) r.fail("expected '->' in bracket line", l.number);
        std::istringstream lhs(l.value.substr(0, arrow));
        std::string a;
        std::string b;
        lhs >> a >> b;
        AlgebraEntry::Bracket br{parse_index(a, r, l.number), parse_index(b, r, l.number), {}};
        for (const auto& term : text::split_top(l.value.substr(arrow + 2), ',')) {
          const auto colon = term.find(':');
          if (colon == std::string::npos) r.fail("expected 'k:coeff' in bracket term", l.number);
          br.terms.push_back({parse_index(text::trim(term.substr(0, colon)), r, l.number),
                              parse(term.substr(colon + 1), e.context)});
        }
        for (int idx : {br.i, br.j})
          if (idx >= e.dim) r.fail("index exceeds dimension", l.number);
        for (const auto& t : br.terms)
          if (t.k >= e.dim) r.fail("index exceeds dimension", l.number);
        e.brackets.push_back(std::move(br));
      } else if (l.key == "levi") {
        e.levi = l.value;
      } else if (l.key == "radical") {
        const auto tokens = text::split_tokens(l.value);
        if (tokens.empty()) r.fail("empty radical line", l.number);
        const text::Reference ref = text::parse_reference(tokens[0]);
        AlgebraEntry::RadicalRef rad;
        rad.name = ref.name;
        for (const auto& [k, v] : ref.args) rad.params[k] = parse(v, e.context);
        for (std::size_t t = 1; t < tokens.size(); ++t) {
          if (t == 1 && tokens[t] == "basis") continue;
          rad.basis.push_back(parse_index(tokens[t], r, l.number));
        }
        e.radical = std::move(rad);
      } else if (l.key == "note") {
        e.notes.push_back(l.value);
      } else if (l.key == "reason") {
        e.reason = e.reason ? *e.reason + " " + l.value : l.value;
      } else if (l.key == "failing") {
        std::istringstream in(l.value);
        std::string i;
        std::string j;
        std::string k;
        in >> i >> j >> k;
        e.failing.push_back({parse_index(i, r, l.number), parse_index(j, r, l.number), parse_index(k, r, l.number)});
      }
    } catch (const ParseError& err) {
      r.fail(err.what(), l.number);
    }
  }
  if (auto q = r.joined("quote"); !q.empty()) e.quote = q;
  return e;
}

UnknownName::UnknownName(const std::string& name, std::vector<std::string> suggestions)
    : std::runtime_error([&] {
        std::string msg = "unknown name '" + name + "'";
        if (!suggestions.empty()) {
          msg += "; did you mean ";
          for (std::size_t i = 0; i < suggestions.size(); ++i) msg += (i ? ", " : "") + suggestions[i];
          msg += "?";
        }
        return msg;
      }()),
      suggestions_(std::move(suggestions)) {}

std::vector<std::string> nearest_names(const std::string& query, const std::vector<std::string>& names,
                                       std::size_t limit) {
  const std::string q = lower_normalized(query);
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& n : names) scored.emplace_back(edit_distance(q, lower_normalized(n)), n);
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(scored[i].second);
  return out;
}

AlgebraCatalog AlgebraCatalog::load(const std::filesystem::path& root) {
  AlgebraCatalog c;
  for (const char* sub : {"appendix1", "appendix2", "body"})
    for (const auto& r : text::read_directory(root / "liealg" / sub)) c.entries_.push_back(parse_algebra(r));
  for (const auto& r : text::read_directory(root / "errata")) c.overlays_.push_back(parse_algebra(r));
  if (c.entries_.empty()) throw text::FormatError("no algebra catalog under " + root.string());
  for (const auto& o : c.overlays_)
    if (!c.find(o.name)) throw text::FormatError(o.source + ": overlay for unknown entry " + o.name);
  return c;
}

const AlgebraEntry* AlgebraCatalog::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

const AlgebraEntry& AlgebraCatalog::entry(const std::string& name) const {
  if (const auto* e = find(name)) return *e;
  throw UnknownName(name, nearest_names(name, names()));
}

const AlgebraEntry* AlgebraCatalog::overlay(const std::string& name) const {
  for (const auto& e : overlays_)
    if (e.name == name) return &e;
  return nullptr;
}

std::vector<std::string> AlgebraCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

StructureConstants AlgebraCatalog::instantiate(const AlgebraEntry& entry_in, const Bindings& bindings,
                                               bool corrected) const {
  const AlgebraEntry* over = corrected ? overlay(entry_in.name) : nullptr;
  const AlgebraEntry& entry = over ? *over : entry_in;

  Bindings b = entry.defaults;
  for (const auto& [k, v] : bindings) b[k] = v;

  StructureConstants sc(entry.dim);
  if (entry.levi) {
    const StructureConstants levi = instantiate(*entry.levi, {}, corrected);
    std::vector<int> map(static_cast<std::size_t>(levi.dim()));
    std::iota(map.begin(), map.end(), 0);
    copy_into(sc, levi, map);
  }
  if (entry.radical) {
    Bindings rb;
    for (const auto& [k, expr] : entry.radical->params) rb[k] = exact_value(expr, b);
    const StructureConstants rad = instantiate(this->entry(entry.radical->name), rb, corrected);
    std::vector<int> map = entry.radical->basis;
    if (map.empty()) {
      map.resize(static_cast<std::size_t>(rad.dim()));
      std::iota(map.begin(), map.end(), entry.dim - rad.dim());
    }
    if (static_cast<int>(map.size()) != rad.dim())
      throw text::FormatError(entry.source + ": radical basis length does not match " + entry.radical->name);
    copy_into(sc, rad, map);
  }
  for (const auto& br : entry.brackets)
    for (const auto& t : br.terms) {
      const Rational v = exact_value(t.coeff, b);
      sc.at(br.i, br.j, t.k) = v;
      if (br.i != br.j) sc.at(br.j, br.i, t.k) = -v;
    }
  sc.bindings = b;
  return sc;
}

StructureConstants AlgebraCatalog::instantiate(const std::string& name, const Bindings& bindings,
                                               bool corrected) const {
  return instantiate(entry(name), bindings, corrected);
}

StructureConstants AlgebraCatalog::semidirect_from_table(const std::string& name) const {
  const AlgebraEntry& e = entry(name);
  if (!e.levi) throw UnknownName(name + " (not a semidirect-sum entry)", {});
  return instantiate(e);
}

StructureConstants AlgebraCatalog::resolve_target(const std::string& spec, const Bindings& outer,
                                                  const ParseContext& ctx) const {
  const auto tokens = text::split_tokens(spec);
  if (tokens.empty()) throw text::FormatError("empty target");
  std::optional<StructureConstants> acc;
  for (const auto& tok : tokens) {
    const text::Reference ref = text::parse_reference(tok);
    Bindings b;
    for (const auto& [k, v] : ref.args) b[k] = exact_value(parse(v, ctx), outer);
    StructureConstants part = instantiate(entry(ref.name), b);
    acc = acc ? direct_sum(*acc, part) : part;
  }
  return *acc;
}

std::vector<Bindings> AlgebraCatalog::test_bindings(const AlgebraEntry& entry, std::size_t count) const {
  std::vector<Bindings> out{entry.defaults};
  auto satisfied = [&](const Bindings& b) {
    return std::all_of(entry.constraints.begin(), entry.constraints.end(), [&](const Constraint& c) {
      try {
        return c.holds(b);
      } catch (const std::domain_error&) {
        return false;
      }
    });
  };
  if (!satisfied(entry.defaults)) throw std::invalid_argument(entry.name + ": defaults violate constraints");
  const auto& values = candidate_values();
  const std::size_t m = entry.param_order.size();
  if (m == 0) return out;
  // Enumerate index tuples by increasing index sum so early picks are simple.
  const std::size_t base = values.size();
  for (std::size_t total = 0; total <= m * (base - 1) && out.size() < count; ++total) {
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
      std::size_t sum = std::accumulate(idx.begin(), idx.end(), std::size_t{0});
      if (sum == total) {
        Bindings b;
        for (std::size_t p = 0; p < m; ++p) b[entry.param_order[p]] = values[idx[p]];
        if (std::find(out.begin(), out.end(), b) == out.end() && satisfied(b)) {
          out.push_back(b);
          if (out.size() >= count) break;
        }
      }
      std::size_t p = 0;
      while (p < m && ++idx[p] == base) idx[p++] = 0;
      if (p == m) break;
    }
  }
  return out;
}

std::map<std::string, int> AlgebraCatalog::coefficient_degrees(const AlgebraEntry& entry_in, bool corrected,
                                                               bool& polynomial) const {
  const AlgebraEntry* over = corrected ? overlay(entry_in.name) : nullptr;
  const AlgebraEntry& entry = over ? *over : entry_in;
  std::map<std::string, int> deg;
  for (const auto& p : entry.param_order) deg[p] = 0;
  for (const auto& br : entry.brackets)
    for (const auto& t : br.terms)
      for (auto& [p, d] : deg) {
        auto k = poly_degree(t.coeff, p);
        if (!k) {
          polynomial = false;
          continue;
        }
        d = std::max(d, *k);
      }
  if (entry.radical) {
    const auto inner = coefficient_degrees(this->entry(entry.radical->name), corrected, polynomial);
    for (auto& [p, d] : deg) {
      int bound = 0;
      for (const auto& [rp, expr] : entry.radical->params) {
        auto k = poly_degree(expr, p);
        if (!k) {
          polynomial = false;
          continue;
        }
        auto it = inner.find(rp);
        bound += (it == inner.end() ? 0 : it->second) * *k;
      }
      d = std::max(d, bound);
    }
  }
  return deg;
}

ParameterCertificate AlgebraCatalog::certify_parameters(const AlgebraEntry& entry, bool corrected) const {
  ParameterCertificate cert;
  bool polynomial = true;
  const auto coeff_deg = coefficient_degrees(entry, corrected, polynomial);
  cert.applicable = polynomial;
  if (!polynomial) return cert;
  std::vector<std::string> names;
  std::vector<std::size_t> sizes;
  for (const auto& [p, d] : coeff_deg) {
    cert.degree_bound[p] = 2 * d;
    names.push_back(p);
    sizes.push_back(static_cast<std::size_t>(2 * d + 1));
  }
  const auto& values = grid_values();
  std::vector<std::size_t> idx(names.size(), 0);
  cert.jacobi_identity = true;
  for (;;) {
    Bindings b;
    for (std::size_t p = 0; p < names.size(); ++p) b[names[p]] = values[idx[p]];
    ++cert.grid_points;
    if (!check_structure(instantiate(entry, b, corrected)).jacobi) {
      cert.jacobi_identity = false;
      break;
    }
    std::size_t p = 0;
    while (p < idx.size() && ++idx[p] == sizes[p]) idx[p++] = 0;
    if (p == idx.size()) break;
  }
  return cert;
}

}  // namespace liesym::lie

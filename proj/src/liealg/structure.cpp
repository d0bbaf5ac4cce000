#include <algorithm>
#include <set>
#include <sstream>

#include "liesym/liealg.hpp"

namespace liesym::lie {

Rational to_rational(const Number& n) {
  if (!n.exact()) throw std::invalid_argument("expected an exact rational, got " + n.to_string());
  return Rational(mpz_class(static_cast<long>(n.num())), mpz_class(static_cast<long>(n.den())));
}

Number to_number(const Rational& r) {
  if (r.get_num().fits_slong_p() && r.get_den().fits_slong_p())
    return Number(r.get_num().get_si(), r.get_den().get_si());
  return Number::real(r.get_d());
}

namespace {

Rational from_number(const Number& n) {
  if (!n.exact()) throw std::invalid_argument("inexact constant in an exact parameter expression");
  return Rational(mpz_class(static_cast<long>(n.num())), mpz_class(static_cast<long>(n.den())));
}

bool is_zero_vector(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r == 0; });
}

}  // namespace

Rational exact_value(const Expr& e, const Bindings& b) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant: return from_number(n.value);
    case Kind::param: {
      auto it = b.find(n.name);
      if (it == b.end()) throw UnboundParameter("parameter '" + n.name + "' is not bound");
      return it->second;
    }
    case Kind::add: return exact_value(n.a(), b) + exact_value(n.b(), b);
    case Kind::sub: return exact_value(n.a(), b) - exact_value(n.b(), b);
    case Kind::mul: return exact_value(n.a(), b) * exact_value(n.b(), b);
    case Kind::div: {
      const Rational den = exact_value(n.b(), b);
      if (den == 0) throw std::domain_error("division by zero in parameter expression " + e.to_string());
      return exact_value(n.a(), b) / den;
    }
    case Kind::neg: return -exact_value(n.a(), b);
    case Kind::pow: {
      const Rational base = exact_value(n.a(), b);
      const Rational ex = exact_value(n.b(), b);
      if (ex.get_den() != 1 || !ex.get_num().fits_slong_p())
        throw std::invalid_argument("non-integer exponent in parameter expression " + e.to_string());
      const long k = ex.get_num().get_si();
      if (k < 0 && base == 0) throw std::domain_error("zero to a negative power in " + e.to_string());
      Rational acc = 1;
      for (long i = 0; i < (k < 0 ? -k : k); ++i) acc *= base;
      return k < 0 ? Rational(1) / acc : acc;
    }
    case Kind::func:
      if (n.func == Func::abs) return abs(exact_value(n.a(), b));
      if (n.func == Func::sign) {
        const Rational v = exact_value(n.a(), b);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
      }
      break;
    default: break;
  }
  throw std::invalid_argument("expression is not an exact parameter expression: " + e.to_string());
}

std::optional<int> poly_degree(const Expr& e, const std::string& name) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant: return 0;
    case Kind::param: return n.name == name ? 1 : 0;
    case Kind::add:
    case Kind::sub: {
      auto a = poly_degree(n.a(), name);
      auto b = poly_degree(n.b(), name);
      if (!a || !b) return std::nullopt;
      return std::max(*a, *b);
    }
    case Kind::mul: {
      auto a = poly_degree(n.a(), name);
      auto b = poly_degree(n.b(), name);
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case Kind::div: {
      auto a = poly_degree(n.a(), name);
      auto b = poly_degree(n.b(), name);
      if (!a || !b || *b != 0) return std::nullopt;
      return *a;
    }
    case Kind::neg: return poly_degree(n.a(), name);
    case Kind::pow: {
      auto a = poly_degree(n.a(), name);
      if (!a) return std::nullopt;
      if (*a == 0 && poly_degree(n.b(), name) == 0) return 0;
      auto ex = n.b().constant_value();
      if (!ex || !ex->is_integer() || ex->num() < 0) return std::nullopt;
      return *a * static_cast<int>(ex->num());
    }
    case Kind::func: {
      auto a = poly_degree(n.a(), name);
      if (a && *a == 0) return 0;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

Constraint::Constraint(std::string text, const ParseContext& ctx) : text_(std::move(text)) {
  static const char* const kOps[] = {"<=", ">=", "==", "!=", "<", ">"};
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i < text_.size(); ++i) {
    const char c = text_[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth != 0) continue;
    for (const char* op : kOps) {
      const std::string_view sv(op);
      if (text_.compare(i, sv.size(), sv) == 0) {
        terms_.push_back(parse(std::string_view(text_).substr(start, i - start), ctx));
        ops_.emplace_back(sv);
        i += sv.size() - 1;
        start = i + 1;
        break;
      }
    }
  }
  terms_.push_back(parse(std::string_view(text_).substr(start), ctx));
  if (ops_.empty()) throw ParseError("constraint without a comparison: " + text_, 0);
}

bool Constraint::holds(const Bindings& b) const {
  std::vector<Rational> values;
  values.reserve(terms_.size());
  for (const Expr& t : terms_) values.push_back(exact_value(t, b));
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Rational& l = values[i];
    const Rational& r = values[i + 1];
    const std::string& op = ops_[i];
    const bool ok = op == "<"    ? l < r
                    : op == "<=" ? l <= r
                    : op == ">"  ? l > r
                    : op == ">=" ? l >= r
                    : op == "==" ? l == r
                                 : l != r;
    if (!ok) return false;
  }
  return true;
}

StructureConstants::StructureConstants(int n)
    : n_(n), c_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
  if (n < 0) throw std::invalid_argument("negative dimension");
}

void StructureConstants::set_bracket(int i, int j, int k, const Rational& v) {
  at(i, j, k) = v;
  at(j, i, k) = -v;
}

Vector StructureConstants::bracket(const Vector& x, const Vector& y) const {
  Vector out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    if (x[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < n_; ++j) {
      if (y[static_cast<std::size_t>(j)] == 0) continue;
      const Rational w = x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
      for (int k = 0; k < n_; ++k) {
        const Rational& c = at(i, j, k);
        if (c != 0) out[static_cast<std::size_t>(k)] += w * c;
      }
    }
  }
  return out;
}

std::vector<Rational> StructureConstants::ad(int i) const {
  std::vector<Rational> m(static_cast<std::size_t>(n_ * n_));
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) m[static_cast<std::size_t>(k * n_ + j)] = at(i, j, k);
  return m;
}

std::vector<std::string> StructureConstants::describe() const {
  std::vector<std::string> lines;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      std::ostringstream os;
      bool any = false;
      for (int k = 0; k < n_; ++k) {
        const Rational& c = at(i, j, k);
        if (c == 0) continue;
        if (!any) {
          if (c == -1) {
            os << "-";
          } else if (c != 1) {
            os << c.get_str() << " ";
          }
        } else {
          os << (c < 0 ? " - " : " + ");
          const Rational mag = abs(c);
          if (mag != 1) os << mag.get_str() << " ";
        }
        os << "e_" << k + 1;
        any = true;
      }
      if (any) lines.push_back("[e_" + std::to_string(i + 1) + ", e_" + std::to_string(j + 1) + "] = " + os.str());
    }
  }
  return lines;
}

Vector jacobi_sum(const StructureConstants& sc, int i, int j, int k) {
  const int n = sc.dim();
  Vector out(static_cast<std::size_t>(n));
  // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
  const std::array<std::array<int, 3>, 3> cyc = {{{i, j, k}, {j, k, i}, {k, i, j}}};
  for (const auto& [a, b, c] : cyc) {
    for (int m = 0; m < n; ++m) {
      const Rational& first = sc.at(a, b, m);
      if (first == 0) continue;
      for (int l = 0; l < n; ++l) out[static_cast<std::size_t>(l)] += first * sc.at(m, c, l);
    }
  }
  return out;
}

StructureReport check_structure(const StructureConstants& sc) {
  StructureReport r;
  const int n = sc.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (sc.at(i, j, k) != -sc.at(j, i, k)) r.antisymmetric = false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (!is_zero_vector(jacobi_sum(sc, i, j, k))) {
          r.jacobi = false;
          r.failing_triples.push_back({i, j, k});
        }
  return r;
}

std::vector<Vector> row_basis(std::vector<Vector> rows) {
  std::vector<Vector> basis;
  if (rows.empty()) return basis;
  const std::size_t n = rows.front().size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const Rational inv = Rational(1) / rows[r][col];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t q = 0; q < rows.size(); ++q) {
      if (q == r || rows[q][col] == 0) continue;
      const Rational f = rows[q][col];
      for (std::size_t c = 0; c < n; ++c) rows[q][c] -= f * rows[r][c];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::array<int, 3> inertia(std::vector<Rational> a, int n) {
  auto at = [&](int i, int j) -> Rational& { return a[static_cast<std::size_t>(i * n + j)]; };
  auto swap_index = [&](int p, int q) {
    if (p == q) return;
    for (int c = 0; c < n; ++c) std::swap(at(p, c), at(q, c));
    for (int r = 0; r < n; ++r) std::swap(at(r, p), at(r, q));
  };
  int rank = 0;
  int pos = 0;
  int neg = 0;
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n && p < 0; ++i)
      if (at(i, i) != 0) p = i;
    if (p < 0) {
      int pi = -1;
      int qi = -1;
      for (int i = k; i < n && pi < 0; ++i)
        for (int j = i + 1; j < n; ++j)
          if (at(i, j) != 0) {
            pi = i;
            qi = j;
            break;
          }
      if (pi < 0) break;
      for (int c = 0; c < n; ++c) at(pi, c) += at(qi, c);
      for (int r = 0; r < n; ++r) at(r, pi) += at(r, qi);
      p = pi;
    }
    swap_index(k, p);
    const Rational d = at(k, k);
    ++rank;
    (d > 0 ? pos : neg) += 1;
    for (int i = k + 1; i < n; ++i) {
      if (at(i, k) == 0) continue;
      const Rational f = at(i, k) / d;
      for (int c = 0; c < n; ++c) at(i, c) -= f * at(k, c);
      for (int r = 0; r < n; ++r) at(r, i) -= f * at(r, k);
    }
  }
  return {rank, pos, neg};
}

AlgebraProfile profile(const StructureConstants& sc) {
  AlgebraProfile p;
  const int n = sc.dim();
  std::vector<Vector> full;
  for (int i = 0; i < n; ++i) {
    Vector e(static_cast<std::size_t>(n));
    e[static_cast<std::size_t>(i)] = 1;
    full.push_back(e);
  }

  auto series = [&](bool derived) {
    std::vector<int> dims{n};
    std::vector<Vector> cur = full;
    while (!cur.empty()) {
      std::vector<Vector> gens;
      for (const auto& x : cur)
        for (const auto& y : derived ? cur : full) gens.push_back(sc.bracket(x, y));
      std::vector<Vector> next = row_basis(std::move(gens));
      if (next.size() == cur.size()) break;
      dims.push_back(static_cast<int>(next.size()));
      cur = std::move(next);
    }
    return dims;
  };
  p.derived_series = series(true);
  p.lower_central_series = series(false);

  std::vector<Vector> columns;
  for (int i = 0; i < n; ++i) {
    Vector v;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) v.push_back(sc.at(i, j, k));
    columns.push_back(std::move(v));
  }
  p.center_dim = n - static_cast<int>(row_basis(std::move(columns)).size());

  p.killing.assign(static_cast<std::size_t>(n * n), Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational tr = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) tr += sc.at(i, k, l) * sc.at(j, l, k);
      p.killing[static_cast<std::size_t>(i * n + j)] = tr;
    }
  const auto [rank, pos, neg] = inertia(p.killing, n);
  p.killing_rank = rank;
  p.killing_positive = pos;
  p.killing_negative = neg;
  p.solvable = p.derived_series.back() == 0;
  p.nilpotent = p.lower_central_series.back() == 0;
  p.semisimple = n > 0 && rank == n;
  return p;
}

StructureConstants direct_sum(const StructureConstants& a, const StructureConstants& b) {
  const int na = a.dim();
  StructureConstants out(na + b.dim());
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k) out.at(i, j, k) = a.at(i, j, k);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      for (int k = 0; k < b.dim(); ++k) out.at(na + i, na + j, na + k) = b.at(i, j, k);
  out.bindings = a.bindings;
  for (const auto& [name, value] : b.bindings) {
    auto [it, inserted] = out.bindings.emplace(name, value);
    if (!inserted && it->second != value) out.bindings.emplace(name + "'", value);
  }
  return out;
}

std::optional<StructureConstants> restrict_to(const StructureConstants& sc, const std::vector<int>& idx) {
  const int m = static_cast<int>(idx.size());
  const std::set<int> inside(idx.begin(), idx.end());
  StructureConstants out(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < sc.dim(); ++k) {
        const Rational& c = sc.at(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)], k);
        if (c == 0) continue;
        if (!inside.count(k)) return std::nullopt;
        const auto pos = std::find(idx.begin(), idx.end(), k) - idx.begin();
        out.at(a, b, static_cast<int>(pos)) = c;
      }
  return out;
}

bool levi_check(const StructureConstants& sc, const std::vector<int>& levi, const std::vector<int>& radical) {
  const int n = sc.dim();
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int i : levi) {
    if (i < 0 || i >= n) return false;
    ++seen[static_cast<std::size_t>(i)];
  }
  for (int i : radical) {
    if (i < 0 || i >= n) return false;
    ++seen[static_cast<std::size_t>(i)];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) return false;

  const std::set<int> rad(radical.begin(), radical.end());
  // [N, L] ⊂ N covers both [N,N] ⊂ N and [N,S] ⊂ N.
  for (int a : radical)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        if (sc.at(a, b, k) != 0 && !rad.count(k)) return false;
  const auto s = restrict_to(sc, levi);
  const auto r = restrict_to(sc, radical);
  if (!s || !r) return false;
  return profile(*s).semisimple && profile(*r).solvable;
}

}  // namespace liesym::lie

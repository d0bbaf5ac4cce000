#include "liesym/vecfield.hpp"

#include <algorithm>
#include <cmath>

namespace liesym::vf {

namespace {

const Expr kT = Expr::variable(Var::t);
const Expr kX = Expr::variable(Var::x);
const Expr kU = Expr::variable(Var::u);

bool time_only(const Expr& e) {
  return !depends_on(e, Var::x) && !depends_on(e, Var::u) && !depends_on(e, Var::ux) && !depends_on(e, Var::s);
}

std::string term(const Expr& coeff, const char* basis) {
  if (coeff.is_one_constant()) return basis;
  const Kind k = coeff.kind();
  std::string s = coeff.to_string();
  if (k == Kind::add || k == Kind::sub) s = "(" + s + ")";
  return s + "*" + basis;
}

}  // namespace

VectorField::VectorField(Expr a, Expr b, Expr c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (!time_only(a_)) throw ClosureError("time coefficient depends on x, u or ux: " + a_.to_string());
  for (const Expr* e : {&b_, &c_})
    if (depends_on(*e, Var::ux) || depends_on(*e, Var::s))
      throw ClosureError("field coefficient depends on ux: " + e->to_string());
}

Expr VectorField::apply(const Expr& f) const {
  return a_ * diff(f, Var::t) + b_ * diff(f, Var::x) + c_ * diff(f, Var::u);
}

std::string VectorField::to_string() const {
  std::string out;
  const std::pair<const Expr*, const char*> parts[] = {{&a_, "d_t"}, {&b_, "d_x"}, {&c_, "d_u"}};
  for (const auto& [coeff, basis] : parts) {
    if (coeff->is_zero_constant()) continue;
    if (!out.empty()) out += " + ";
    out += term(*coeff, basis);
  }
  return out.empty() ? "0" : out;
}

VectorField operator+(const VectorField& p, const VectorField& q) {
  return {p.a() + q.a(), p.b() + q.b(), p.c() + q.c()};
}

VectorField operator-(const VectorField& p, const VectorField& q) {
  return {p.a() - q.a(), p.b() - q.b(), p.c() - q.c()};
}

VectorField operator*(const Expr& k, const VectorField& q) { return {k * q.a(), k * q.b(), k * q.c()}; }

VectorField commutator(const VectorField& p, const VectorField& q) {
  Expr a = p.apply(q.a()) - q.apply(p.a());
  if (!time_only(a)) throw ClosureError("commutator leaves the admissible class: time coefficient " + a.to_string());
  return {a, p.apply(q.b()) - q.apply(p.b()), p.apply(q.c()) - q.apply(p.c())};
}

VectorField combination(const std::vector<lie::Rational>& coeffs, const std::vector<VectorField>& fields) {
  if (coeffs.size() != fields.size()) throw std::invalid_argument("combination: size mismatch");
  VectorField out{Expr(), Expr(), Expr()};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    out = out + Expr::constant(lie::to_number(coeffs[k])) * fields[k];
  }
  return out;
}

RealizationReport verify_realization(const Realization& r, const std::vector<Point>& points, double tol) {
  const int n = static_cast<int>(r.fields.size());
  if (n != r.target.dim())
    throw std::invalid_argument(r.label + ": " + std::to_string(n) + " generators for a " +
                                std::to_string(r.target.dim()) + "-dimensional target");
  RealizationReport rep;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::vector<lie::Rational> coeffs(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) coeffs[static_cast<std::size_t>(k)] = r.target.at(i, j, k);
      const VectorField diffq = commutator(r.fields[static_cast<std::size_t>(i)], r.fields[static_cast<std::size_t>(j)]) -
                                combination(coeffs, r.fields);
      for (const Expr& comp : diffq.coefficients()) {
        const ZeroTest z = is_zero(comp, points, tol);
        rep.points = std::max(rep.points, z.used_points);
        rep.max_residual = std::max(rep.max_residual, z.max_residual);
        if (!z.zero && rep.ok) {
          rep.ok = false;
          rep.failing_pair = std::make_pair(i, j);
          rep.witness = z.witness;
        }
      }
    }
  }
  if (n < 2) rep.points = points.size();
  return rep;
}

RealizationReport verify_realization(const Realization& r, const SampleDomain& dom, double tol) {
  return verify_realization(r, dom.draw(), tol);
}

RealizationReport verify_realization(const Realization& r, double tol) { return verify_realization(r, r.domain, tol); }

PointTransformation::PointTransformation(Expr t, Expr x, Expr u, std::optional<std::array<Expr, 3>> inv,
                                         std::string name)
    : T(std::move(t)), X(std::move(x)), U(std::move(u)), inverse(std::move(inv)), label(std::move(name)) {
  if (!time_only(T)) throw std::invalid_argument("new time may depend on t only: " + T.to_string());
  if (inverse && !time_only((*inverse)[0]))
    throw std::invalid_argument("inverse time may depend on t only: " + (*inverse)[0].to_string());
}

PointTransformation PointTransformation::identity() {
  return PointTransformation(kT, kX, kU, std::array<Expr, 3>{kT, kX, kU}, "identity");
}

Point PointTransformation::map(const Point& p) const {
  Point q = p;
  q[0] = eval(T, p);
  q[1] = eval(X, p);
  q[2] = eval(U, p);
  return q;
}

Point PointTransformation::map_back(const Point& p) const {
  if (!inverse) throw MissingInverse("transformation " + label + " has no declared inverse");
  Point q = p;
  for (std::size_t i = 0; i < 3; ++i) q[i] = eval((*inverse)[i], p);
  return q;
}

void PointTransformation::check_nondegenerate(const std::vector<Point>& points) const {
  const Expr tt = diff(T, Var::t);
  const Expr jac = diff(X, Var::x) * diff(U, Var::u) - diff(X, Var::u) * diff(U, Var::x);
  for (const Point& p : points) {
    const Evaluation a = evaluate(tt, p);
    const Evaluation j = evaluate(jac, p);
    if (a.singular || j.singular) continue;
    if (std::abs(a.value) <= 1e-9 * (1.0 + a.scale) || std::abs(j.value) <= 1e-9 * (1.0 + j.scale))
      throw DegenerateTransformation("transformation " + label + " is degenerate at t=" + std::to_string(p[0]) +
                                     ", x=" + std::to_string(p[1]) + ", u=" + std::to_string(p[2]));
    if (inverse) {
      const Point back = map_back(map(p));
      for (std::size_t i = 0; i < 3; ++i)
        if (std::abs(back[i] - p[i]) > 1e-8 * (1.0 + std::abs(p[i])))
          throw DegenerateTransformation("declared inverse of " + label + " does not undo the map");
    }
  }
}

Expr PointTransformation::to_new(const Expr& e) const {
  if (!inverse) throw MissingInverse("transformation " + label + " has no declared inverse");
  return substitute(e, {{Var::t, (*inverse)[0]}, {Var::x, (*inverse)[1]}, {Var::u, (*inverse)[2]}});
}

VectorField pushforward(const VectorField& q, const PointTransformation& tr) {
  if (!tr.inverse) throw MissingInverse("pushforward needs the inverse of " + tr.label);
  const Expr a = q.a() * diff(tr.T, Var::t);
  const Expr b = q.apply(tr.X);
  const Expr c = q.apply(tr.U);
  return {tr.to_new(a), tr.to_new(b), tr.to_new(c)};
}

Realization conjugate_realization(const Realization& r, const PointTransformation& tr) {
  if (!tr.inverse) throw MissingInverse("conjugation needs the inverse of " + tr.label);
  const std::vector<Point> old_points = r.domain.draw();
  tr.check_nondegenerate(old_points);

  Realization out = r;
  out.label = r.label + (tr.label.empty() ? std::string(" (conjugated)") : " under " + tr.label);
  out.fields.clear();
  for (const auto& f : r.fields) out.fields.push_back(pushforward(f, tr));

  SampleDomain dom;
  dom.seed = r.domain.seed;
  dom.count = r.domain.count;
  dom.box[3] = r.domain.box[3];
  for (std::size_t i = 0; i < 3; ++i) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const Point& p : old_points) {
      const double v = tr.map(p)[i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double pad = std::max(1e-6, 0.05 * (hi - lo));
    dom.box[i] = {lo - pad, hi + pad};
  }
  for (const Expr& g : r.domain.guards) dom.guards.push_back(tr.to_new(g));
  const Expr olds[3] = {kT, kX, kU};
  for (std::size_t i = 0; i < 3; ++i) {
    const Expr back = tr.to_new(olds[i]);
    dom.guards.push_back(back - Expr::constant(Number::real(r.domain.box[i].lo)));
    dom.guards.push_back(Expr::constant(Number::real(r.domain.box[i].hi)) - back);
  }
  out.domain = std::move(dom);
  return out;
}

const Realization& find_realization(const std::vector<Realization>& all, const std::string& label) {
  for (const auto& r : all)
    if (r.label == label) return r;
  for (const auto& r : all)
    if (!r.anchor.empty() && r.anchor == label) return r;
  throw std::out_of_range("unknown realization '" + label + "'");
}

}  // namespace vf

#include <algorithm>
#include <cmath>

#include "liesym/detsys.hpp"

namespace liesym::ds {

namespace {

const Expr kUx = Expr::variable(Var::ux);

Expr sq(const Expr& e) { return e * e; }

// Derivative of f along a d_t + b d_x + c d_u + eta d_ux.
Expr along(const vf::VectorField& q, const Expr& eta, const Expr& f) {
  return q.a() * diff(f, Var::t) + q.b() * diff(f, Var::x) + q.c() * diff(f, Var::u) + eta * diff(f, Var::ux);
}

}  // namespace

void EquationSpec::check_nondegenerate(const std::vector<Point>& points) const {
  for (const Point& p : points) {
    const Evaluation f = evaluate(F, p);
    if (f.singular) throw std::invalid_argument(label + ": F is singular at a sampled point");
    if (std::abs(f.value) <= 1e-12 * (1.0 + f.scale)) throw std::invalid_argument(label + ": F vanishes at a sampled point");
  }
}

ResidualExprs determining_expressions(const EquationSpec& eq, const vf::VectorField& q) {
  const Expr& a = q.a();
  const Expr& b = q.b();
  const Expr& c = q.c();
  const Expr da = diff(a, Var::t);
  const Expr bx = diff(b, Var::x), bu = diff(b, Var::u), bt = diff(b, Var::t);
  const Expr cx = diff(c, Var::x), cu = diff(c, Var::u), ct = diff(c, Var::t);
  const Expr bxx = diff(bx, Var::x), bxu = diff(bx, Var::u), buu = diff(bu, Var::u);
  const Expr cxx = diff(cx, Var::x), cxu = diff(cx, Var::u), cuu = diff(cu, Var::u);
  const Expr two = Expr::constant(2);

  // First prolongation coefficient of the u_x direction.
  const Expr eta = cx + kUx * cu - kUx * bx - sq(kUx) * bu;

  ResidualExprs out;
  out.r1 = (two * bx + two * kUx * bu - da) * eq.F - along(q, eta, eq.F);
  out.r2 = ct - kUx * bt + (cu - da - kUx * bu) * eq.G +
           (kUx * bxx - cxx - two * kUx * cxu - sq(kUx) * cuu + two * sq(kUx) * bxu + sq(kUx) * kUx * buu) * eq.F -
           along(q, eta, eq.G);
  return out;
}

Residuals determining_residuals(const EquationSpec& eq, const vf::VectorField& q, const Point& p) {
  const ResidualExprs r = determining_expressions(eq, q);
  return {eval(r.r1, p), eval(r.r2, p)};
}

InvarianceReport check_invariance(const EquationSpec& eq, const std::vector<vf::VectorField>& fields,
                                  const std::vector<Point>& points, double tol) {
  InvarianceReport rep;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const ResidualExprs r = determining_expressions(eq, fields[k]);
    int which = 1;
    for (const Expr* e : {&r.r1, &r.r2}) {
      const ZeroTest z = is_zero(*e, points, tol);
      rep.points = std::max(rep.points, z.used_points);
      rep.max_residual = std::max(rep.max_residual, z.max_residual);
      if (!z.zero && rep.ok) {
        rep.ok = false;
        rep.failing_generator = k;
        rep.failing_equation = which;
        rep.witness = z.witness;
      }
      ++which;
    }
  }
  if (fields.empty()) rep.points = points.size();
  return rep;
}

InvarianceReport check_invariance(const EquationSpec& eq, const std::vector<vf::VectorField>& fields,
                                  const SampleDomain& dom, double tol) {
  return check_invariance(eq, fields, dom.draw(), tol);
}

bool check_ftilde_ode(const Expr& ftilde, double k, double m, double n, double p, const SampleDomain& dom,
                      double tol) {
  const Expr w = kUx;
  auto num = [](double v) { return Expr::constant(Number::real(v)); };
  const Expr lhs = (num(k) - num(2 * m) * w) * ftilde;
  const Expr rhs = (num(n) + num(p) * w + num(m) * sq(w)) * diff(ftilde, Var::ux);
  return is_zero(lhs - rhs, dom, tol).zero;
}

EquationSpec transform_equation(const EquationSpec& eq, const vf::PointTransformation& tr) {
  if (!tr.inverse) throw vf::MissingInverse("transforming an equation needs the inverse of " + tr.label);
  auto d = [](const Expr& e, Var v) { return diff(e, v); };
  const Expr& X = tr.X;
  const Expr& U = tr.U;
  const Expr dx_total = d(X, Var::x) + d(X, Var::u) * kUx;
  const Expr slope = (d(U, Var::x) + d(U, Var::u) * kUx) / dx_total;
  const Expr slope_x = (d(slope, Var::x) + d(slope, Var::u) * kUx) / dx_total;
  const Expr slope_xx = d(slope, Var::ux) / dx_total;
  const Expr ut_weight = d(U, Var::u) - slope * d(X, Var::u);
  const Expr dt = d(tr.T, Var::t);

  const Expr f_old = ut_weight * eq.F / (dt * slope_xx);
  const Expr g_old = (d(U, Var::t) - slope * d(X, Var::t) + ut_weight * eq.G) / dt - f_old * slope_x;

  // Old u_x through the new slope, then old (t, x, u) through the inverse.
  const Expr ux_old = (d(X, Var::x) * kUx - d(U, Var::x)) / (d(U, Var::u) - d(X, Var::u) * kUx);
  const std::map<Var, Expr> inv{{Var::t, (*tr.inverse)[0]}, {Var::x, (*tr.inverse)[1]}, {Var::u, (*tr.inverse)[2]}};
  auto to_new = [&](const Expr& e) { return substitute(substitute(e, {{Var::ux, ux_old}}), inv); };

  EquationSpec out;
  out.label = eq.label + (tr.label.empty() ? std::string(" (transformed)") : " under " + tr.label);
  out.F = to_new(f_old);
  out.G = to_new(g_old);

  const std::vector<Point> old_points = eq.domain.draw();
  tr.check_nondegenerate(old_points);
  out.domain.seed = eq.domain.seed;
  out.domain.count = eq.domain.count;
  for (std::size_t i = 0; i < 4; ++i) {
    double lo = INFINITY, hi = -INFINITY;
    for (const Point& p : old_points) {
      const Point img = tr.map(p);
      const double v = i < 3 ? img[i] : eval(slope, p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double pad = std::max(1e-6, 0.02 * (hi - lo));
    out.domain.box[i] = {lo - pad, hi + pad};
  }
  for (const Expr& g : eq.domain.guards) out.domain.guards.push_back(to_new(g));
  const Expr olds[4] = {Expr::variable(Var::t), Expr::variable(Var::x), Expr::variable(Var::u), kUx};
  for (std::size_t i = 0; i < 4; ++i) {
    const Expr back = to_new(olds[i]);
    out.domain.guards.push_back(back - Expr::constant(Number::real(eq.domain.box[i].lo)));
    out.domain.guards.push_back(Expr::constant(Number::real(eq.domain.box[i].hi)) - back);
  }
  return out;
}

}  // namespace liesym::ds

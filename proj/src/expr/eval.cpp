#include <cmath>
#include <numbers>

#include "liesym/expr.hpp"

namespace liesym {

namespace {

constexpr double kPoleMargin = 0.2;
constexpr double kRelativeDenominatorMargin = 1e-3;
constexpr double kAbsoluteDenominatorFloor = 1e-6;

bool near_tan_pole(double arg) {
  const double shifted = std::fmod(std::fabs(arg - std::numbers::pi / 2), std::numbers::pi);
  return std::min(shifted, std::numbers::pi - shifted) < kPoleMargin;
}

bool is_integral(double v) { return std::isfinite(v) && std::floor(v) == v; }

Evaluation leaf(double v) { return {v, std::fabs(v), !std::isfinite(v)}; }

Evaluation combine(double v, const Evaluation& a, const Evaluation& b, bool singular = false) {
  return {v, std::max({std::fabs(v), a.scale, b.scale}), singular || a.singular || b.singular || !std::isfinite(v)};
}

Evaluation eval_node(const Node& n, const Point& p) {
  switch (n.kind) {
    case Kind::constant:
    case Kind::param: return leaf(n.value.to_double());
    case Kind::variable: return leaf(p[static_cast<std::size_t>(n.var)]);
    case Kind::neg: {
      const Evaluation a = eval_node(*n.lhs, p);
      return combine(-a.value, a, a);
    }
    case Kind::add:
    case Kind::sub:
    case Kind::mul: {
      const Evaluation a = eval_node(*n.lhs, p);
      const Evaluation b = eval_node(*n.rhs, p);
      const double v = n.kind == Kind::add ? a.value + b.value
                       : n.kind == Kind::sub ? a.value - b.value
                                             : a.value * b.value;
      return combine(v, a, b);
    }
    case Kind::div: {
      const Evaluation a = eval_node(*n.lhs, p);
      const Evaluation b = eval_node(*n.rhs, p);
      const double den = std::fabs(b.value);
      const bool pole = den < kAbsoluteDenominatorFloor || den < kRelativeDenominatorMargin * b.scale;
      return combine(pole ? 0.0 : a.value / b.value, a, b, pole);
    }
    case Kind::pow: {
      const Evaluation a = eval_node(*n.lhs, p);
      const Evaluation b = eval_node(*n.rhs, p);
      bool bad = false;
      if (a.value < 0.0 && !is_integral(b.value)) bad = true;
      if (a.value == 0.0 && b.value < 0.0) bad = true;
      if (b.value < 0.0 && std::fabs(a.value) < kAbsoluteDenominatorFloor) bad = true;
      // The exponent's own magnitude says nothing about cancellation, so it
      // does not enter the scale.
      const Evaluation r = combine(bad ? 0.0 : std::pow(a.value, b.value), a, a, bad || b.singular);
      return r;
    }
    case Kind::func: {
      const Evaluation a = eval_node(*n.lhs, p);
      const double x = a.value;
      bool bad = false;
      double v = 0.0;
      switch (n.func) {
        case Func::sin: v = std::sin(x); break;
        case Func::cos: v = std::cos(x); break;
        case Func::tan:
          bad = near_tan_pole(x);
          v = std::tan(x);
          break;
        case Func::sec:
          bad = near_tan_pole(x);
          v = 1.0 / std::cos(x);
          break;
        case Func::exp: v = std::exp(x); break;
        case Func::ln:
          bad = x <= 1e-12;
          v = bad ? 0.0 : std::log(x);
          break;
        case Func::sqrt:
          bad = x < 0.0;
          v = bad ? 0.0 : std::sqrt(x);
          break;
        case Func::arctan: v = std::atan(x); break;
        case Func::abs: v = std::fabs(x); break;
        case Func::sign:
          bad = std::fabs(x) < 1e-9 * std::max(1.0, a.scale);
          v = x > 0.0 ? 1.0 : -1.0;
          break;
      }
      return combine(v, a, a, bad);
    }
    case Kind::slot: {
      if (!n.slot_impl) throw std::invalid_argument("cannot evaluate unbound slot " + n.name);
      const Evaluation a = eval_node(*n.lhs, p);
      Point q = p;
      q[static_cast<std::size_t>(Var::s)] = a.value;
      const Evaluation body = eval_node(*n.slot_impl, q);
      return combine(body.value, a, body);
    }
  }
  return {};
}

}  // namespace

Evaluation evaluate(const Expr& e, const Point& p) { return eval_node(e.node(), p); }

double eval(const Expr& e, const Point& p) {
  const Evaluation r = evaluate(e, p);
  if (r.singular) throw SingularPoint("expression is singular at the requested point");
  return r.value;
}

}  // namespace liesym

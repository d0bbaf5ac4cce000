#include "liesym/expr.hpp"

namespace liesym {

namespace {

Expr func_derivative(Func f, const Expr& a) {
  switch (f) {
    case Func::sin: return apply(Func::cos, a);
    case Func::cos: return -apply(Func::sin, a);
    case Func::tan: return pow(apply(Func::sec, a), Expr::constant(2));
    case Func::sec: return apply(Func::sec, a) * apply(Func::tan, a);
    case Func::exp: return apply(Func::exp, a);
    case Func::ln: return Expr::constant(1) / a;
    case Func::sqrt: return Expr::constant(1) / (Expr::constant(2) * apply(Func::sqrt, a));
    case Func::arctan: return Expr::constant(1) / (Expr::constant(1) + pow(a, Expr::constant(2)));
    case Func::abs: return apply(Func::sign, a);
    case Func::sign: return Expr();
  }
  return Expr();
}

}  // namespace

Expr diff(const Expr& e, Var v) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::param: return Expr();
    case Kind::variable: return n.var == v ? Expr::constant(1) : Expr();
    case Kind::add: return diff(n.a(), v) + diff(n.b(), v);
    case Kind::sub: return diff(n.a(), v) - diff(n.b(), v);
    case Kind::neg: return -diff(n.a(), v);
    case Kind::mul: return diff(n.a(), v) * n.b() + n.a() * diff(n.b(), v);
    case Kind::div: {
      const Expr da = diff(n.a(), v);
      const Expr db = diff(n.b(), v);
      if (db.is_zero_constant()) return da / n.b();
      return da / n.b() - n.a() * db / pow(n.b(), Expr::constant(2));
    }
    case Kind::pow: {
      const Expr base = n.a();
      const Expr expo = n.b();
      const Expr dbase = diff(base, v);
      if (!depends_on(expo, v)) {
        if (dbase.is_zero_constant()) return Expr();
        return expo * pow(base, expo - Expr::constant(1)) * dbase;
      }
      return e * (diff(expo, v) * apply(Func::ln, base) + expo * dbase / base);
    }
    case Kind::func: {
      const Expr da = diff(n.a(), v);
      if (da.is_zero_constant()) return Expr();
      return func_derivative(n.func, n.a()) * da;
    }
    case Kind::slot: {
      const Expr da = diff(n.a(), v);
      if (da.is_zero_constant()) return Expr();
      auto next = std::make_shared<Node>(n);
      next->order = n.order + 1;
      if (n.slot_impl) next->slot_impl = diff(Expr(n.slot_impl), Var::s).ptr();
      return Expr(std::move(next)) * da;
    }
  }
  return Expr();
}

}  // namespace liesym

#include <algorithm>
#include <sstream>

#include "liesym/expr.hpp"

namespace liesym {

namespace {

std::shared_ptr<Node> make_node(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

Expr binary(Kind k, const Expr& a, const Expr& b) {
  auto n = make_node(k);
  n->lhs = a.ptr();
  n->rhs = b.ptr();
  return Expr(std::move(n));
}

const std::shared_ptr<const Node>& zero_node() {
  static const std::shared_ptr<const Node> zero = make_node(Kind::constant);
  return zero;
}

}  // namespace

std::string_view var_name(Var v) {
  switch (v) {
    case Var::t: return "t";
    case Var::x: return "x";
    case Var::u: return "u";
    case Var::ux: return "ux";
    case Var::s: return "s";
  }
  return "?";
}

std::string_view func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::sec: return "sec";
    case Func::exp: return "exp";
    case Func::ln: return "ln";
    case Func::sqrt: return "sqrt";
    case Func::arctan: return "arctan";
    case Func::abs: return "abs";
    case Func::sign: return "sign";
  }
  return "?";
}

Expr::Expr() : node_(zero_node()) {}

Kind Expr::kind() const { return node_->kind; }

bool Expr::is_constant() const { return node_->kind == Kind::constant; }
bool Expr::is_zero_constant() const { return is_constant() && node_->value.is_zero(); }
bool Expr::is_one_constant() const { return is_constant() && node_->value.is_one(); }

std::optional<Number> Expr::constant_value() const {
  if (!is_constant()) return std::nullopt;
  return node_->value;
}

Expr Expr::constant(Number value) {
  auto n = make_node(Kind::constant);
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::param(std::string name, Number value) {
  auto n = make_node(Kind::param);
  n->name = std::move(name);
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = make_node(Kind::variable);
  n->var = v;
  return Expr(std::move(n));
}

Expr Expr::function(Func f, Expr arg) { return apply(f, arg); }

Expr Expr::slot(std::string name, Expr arg, int order, std::optional<Expr> binding) {
  auto n = make_node(Kind::slot);
  n->name = std::move(name);
  n->lhs = arg.ptr();
  n->order = order;
  if (binding) {
    Expr impl = *binding;
    for (int k = 0; k < order; ++k) impl = diff(impl, Var::s);
    n->slot_impl = impl.ptr();
  }
  return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.node().value + b.node().value);
  if (a.is_zero_constant()) return b;
  if (b.is_zero_constant()) return a;
  return binary(Kind::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.node().value - b.node().value);
  if (b.is_zero_constant()) return a;
  if (a.is_zero_constant()) return -b;
  return binary(Kind::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.node().value * b.node().value);
  if (a.is_zero_constant() || b.is_zero_constant()) return Expr();
  if (a.is_one_constant()) return b;
  if (b.is_one_constant()) return a;
  return binary(Kind::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && !b.node().value.is_zero())
    return Expr::constant(a.node().value / b.node().value);
  if (a.is_zero_constant() && !b.is_zero_constant()) return Expr();
  if (b.is_one_constant()) return a;
  return binary(Kind::div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.node().value);
  if (a.kind() == Kind::neg) return a.node().a();
  auto n = make_node(Kind::neg);
  n->lhs = a.ptr();
  return Expr(std::move(n));
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero_constant()) return Expr::constant(1);
  if (exponent.is_one_constant()) return base;
  if (base.is_constant() && exponent.is_constant() && base.node().value.exact()) {
    auto r = power(base.node().value, exponent.node().value);
    if (r && r->exact()) return Expr::constant(*r);
  }
  return binary(Kind::pow, base, exponent);
}

Expr apply(Func f, const Expr& arg) {
  auto n = make_node(Kind::func);
  n->func = f;
  n->lhs = arg.ptr();
  return Expr(std::move(n));
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.ptr() == b.ptr()) return true;
  const Node& x = a.node();
  const Node& y = b.node();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::constant: return x.value == y.value;
    case Kind::param: return x.name == y.name && x.value == y.value;
    case Kind::variable: return x.var == y.var;
    case Kind::neg: return structurally_equal(x.a(), y.a());
    case Kind::func: return x.func == y.func && structurally_equal(x.a(), y.a());
    case Kind::slot:
      if (x.name != y.name || x.order != y.order) return false;
      if (static_cast<bool>(x.slot_impl) != static_cast<bool>(y.slot_impl)) return false;
      if (x.slot_impl && !structurally_equal(Expr(x.slot_impl), Expr(y.slot_impl))) return false;
      return structurally_equal(x.a(), y.a());
    default: return structurally_equal(x.a(), y.a()) && structurally_equal(x.b(), y.b());
  }
}

bool depends_on(const Expr& e, Var v) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::param: return false;
    case Kind::variable: return n.var == v;
    case Kind::neg:
    case Kind::func:
    case Kind::slot: return depends_on(n.a(), v);
    default: return depends_on(n.a(), v) || depends_on(n.b(), v);
  }
}

static Expr rebuild(const Node& n, const Expr& a, const Expr& b) {
  switch (n.kind) {
    case Kind::add: return a + b;
    case Kind::sub: return a - b;
    case Kind::mul: return a * b;
    case Kind::div: return a / b;
    case Kind::pow: return pow(a, b);
    case Kind::neg: return -a;
    case Kind::func: return apply(n.func, a);
    default: break;
  }
  throw std::logic_error("rebuild: leaf node");
}

Expr substitute(const Expr& e, const std::map<Var, Expr>& repl) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::param: return e;
    case Kind::variable: {
      auto it = repl.find(n.var);
      return it == repl.end() ? e : it->second;
    }
    case Kind::slot: {
      auto copy = std::make_shared<Node>(n);
      copy->lhs = substitute(n.a(), repl).ptr();
      return Expr(std::move(copy));
    }
    case Kind::neg:
    case Kind::func: return rebuild(n, substitute(n.a(), repl), Expr());
    default: return rebuild(n, substitute(n.a(), repl), substitute(n.b(), repl));
  }
}

Expr bind_slots(const Expr& e, const std::map<std::string, Expr>& bindings) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::param:
    case Kind::variable: return e;
    case Kind::slot: {
      Expr arg = bind_slots(n.a(), bindings);
      auto it = bindings.find(n.name);
      if (it != bindings.end()) return Expr::slot(n.name, arg, n.order, it->second);
      auto copy = std::make_shared<Node>(n);
      copy->lhs = arg.ptr();
      return Expr(std::move(copy));
    }
    case Kind::neg:
    case Kind::func: return rebuild(n, bind_slots(n.a(), bindings), Expr());
    default: return rebuild(n, bind_slots(n.a(), bindings), bind_slots(n.b(), bindings));
  }
}

namespace {

void collect_unbound(const Expr& e, std::vector<std::string>& out) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::param:
    case Kind::variable: return;
    case Kind::slot:
      if (!n.slot_impl && std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
      collect_unbound(n.a(), out);
      return;
    case Kind::neg:
    case Kind::func: collect_unbound(n.a(), out); return;
    default:
      collect_unbound(n.a(), out);
      collect_unbound(n.b(), out);
  }
}

// Precedence levels used by the printer; a child is parenthesised when its
// level is below what the parent position requires.
int level(Kind k) {
  switch (k) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::pow: return 4;
    default: return 5;
  }
}

void print(const Expr& e, std::ostringstream& os, int required) {
  const Node& n = e.node();
  const bool paren = level(n.kind) < required;
  if (paren) os << '(';
  switch (n.kind) {
    case Kind::constant: {
      std::string s = n.value.to_string();
      if (n.value.negative() || s.find('/') != std::string::npos) {
        os << '(' << s << ')';
      } else {
        os << s;
      }
      break;
    }
    case Kind::param: os << n.name; break;
    case Kind::variable: os << var_name(n.var); break;
    case Kind::neg:
      os << "(-";
      print(n.a(), os, 3);
      os << ')';
      break;
    case Kind::func:
      os << func_name(n.func) << '(';
      print(n.a(), os, 0);
      os << ')';
      break;
    case Kind::slot:
      os << n.name << std::string(static_cast<std::size_t>(n.order), '\'') << '(';
      print(n.a(), os, 0);
      os << ')';
      break;
    case Kind::add:
      print(n.a(), os, 1);
      os << " + ";
      print(n.b(), os, 2);
      break;
    case Kind::sub:
      print(n.a(), os, 1);
      os << " - ";
      print(n.b(), os, 2);
      break;
    case Kind::mul:
      print(n.a(), os, 2);
      os << '*';
      print(n.b(), os, 3);
      break;
    case Kind::div:
      print(n.a(), os, 2);
      os << '/';
      print(n.b(), os, 3);
      break;
    case Kind::pow:
      print(n.a(), os, 5);
      os << '^';
      print(n.b(), os, 4);
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::vector<std::string> unbound_slots(const Expr& e) {
  std::vector<std::string> out;
  collect_unbound(e, out);
  return out;
}

std::size_t tree_size(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::param:
    case Kind::variable: return 1;
    case Kind::neg:
    case Kind::func:
    case Kind::slot: return 1 + tree_size(n.a());
    default: return 1 + tree_size(n.a()) + tree_size(n.b());
  }
}

std::string Expr::to_string() const {
  std::ostringstream os;
  print(*this, os, 0);
  return os.str();
}

}  // namespace liesym

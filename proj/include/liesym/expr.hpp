#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "liesym/number.hpp"

namespace liesym {

/// Coordinates an expression may depend on. `s` is the formal argument of a
/// univariate slot binding and never appears in equation-level expressions.
enum class Var : std::uint8_t { t = 0, x = 1, u = 2, ux = 3, s = 4 };

inline constexpr std::size_t kNumVars = 5;

[[nodiscard]] std::string_view var_name(Var v);

enum class Func : std::uint8_t { sin, cos, tan, sec, exp, ln, sqrt, arctan, abs, sign };

[[nodiscard]] std::string_view func_name(Func f);

enum class Kind : std::uint8_t { constant, param, variable, add, sub, mul, div, pow, neg, func, slot };

class Expr;
struct Node;

/// Immutable expression handle. Copying shares the tree.
class Expr {
 public:
  Expr();  // zero constant
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  [[nodiscard]] static Expr constant(Number value);
  [[nodiscard]] static Expr constant(std::int64_t value) { return constant(Number(value)); }
  [[nodiscard]] static Expr param(std::string name, Number value);
  [[nodiscard]] static Expr variable(Var v);
  [[nodiscard]] static Expr function(Func f, Expr arg);
  /// Slot application of derivative order `order` (0 = the function itself).
  [[nodiscard]] static Expr slot(std::string name, Expr arg, int order = 0, std::optional<Expr> binding = std::nullopt);

  [[nodiscard]] const Node& node() const { return *node_; }
  [[nodiscard]] const std::shared_ptr<const Node>& ptr() const { return node_; }
  [[nodiscard]] Kind kind() const;

  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] bool is_zero_constant() const;
  [[nodiscard]] bool is_one_constant() const;
  [[nodiscard]] std::optional<Number> constant_value() const;

  [[nodiscard]] std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

 private:
  std::shared_ptr<const Node> node_;
};

[[nodiscard]] Expr pow(const Expr& base, const Expr& exponent);
[[nodiscard]] Expr apply(Func f, const Expr& arg);

struct Node {
  Kind kind = Kind::constant;
  Number value;          // constant / param value
  Var var = Var::t;      // variable
  Func func = Func::sin; // func
  std::string name;      // param / slot name
  std::shared_ptr<const Node> lhs, rhs;  // operands (lhs only for unary / func / slot)
  int order = 0;                         // slot derivative order
  std::shared_ptr<const Node> slot_impl; // order-th derivative of the binding, in s

  [[nodiscard]] Expr a() const { return Expr(lhs); }
  [[nodiscard]] Expr b() const { return Expr(rhs); }
};

/// Structural equality: same tree shape, same constants, same names.
[[nodiscard]] bool structurally_equal(const Expr& a, const Expr& b);

[[nodiscard]] bool depends_on(const Expr& e, Var v);

/// Exact symbolic derivative.
[[nodiscard]] Expr diff(const Expr& e, Var v);

/// Simultaneous substitution of variables.
[[nodiscard]] Expr substitute(const Expr& e, const std::map<Var, Expr>& repl);

/// Binds every slot named in `bindings` (univariate expressions in `s`).
[[nodiscard]] Expr bind_slots(const Expr& e, const std::map<std::string, Expr>& bindings);

/// Names of slots that are still unbound.
[[nodiscard]] std::vector<std::string> unbound_slots(const Expr& e);

/// Number of nodes, counting shared subtrees once per occurrence.
[[nodiscard]] std::size_t tree_size(const Expr& e);

// ---------------------------------------------------------------------------
// Evaluation

using Point = std::array<double, kNumVars>;

[[nodiscard]] inline Point make_point(double t, double x, double u, double ux, double s = 0.0) {
  return {t, x, u, ux, s};
}

/// Result of a numeric evaluation. `scale` is the largest magnitude taken by
/// any subterm; `singular` is set when a node left its admissible region.
struct Evaluation {
  double value = 0.0;
  double scale = 0.0;
  bool singular = false;
};

[[nodiscard]] Evaluation evaluate(const Expr& e, const Point& p);

class SingularPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates and throws SingularPoint when the point is singular for `e`.
[[nodiscard]] double eval(const Expr& e, const Point& p);

// ---------------------------------------------------------------------------
// Parsing

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Names visible to the parser beyond the fixed variables and functions.
struct ParseContext {
  std::map<std::string, Number> params;
  std::map<std::string, std::optional<Expr>> slots;  // name -> optional binding
  std::map<std::string, Expr> macros;                // named subexpressions, e.g. w := ux*sec(u)
  bool allow_slot_argument = false;                   // accept `s`

  /// Applies "param <name>=<rational>" / "slot <name>" declarations.
  void declare(std::string_view line);
};

[[nodiscard]] Expr parse(std::string_view text, const ParseContext& ctx = {});

}  // namespace liesym

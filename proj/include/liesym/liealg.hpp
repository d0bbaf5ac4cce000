#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym::lie {

using Rational = mpq_class;
using Bindings = std::map<std::string, Rational>;
using Vector = std::vector<Rational>;

class UnboundParameter : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact value of a parameter expression (+, -, *, /, integer powers, abs)
/// under the given bindings. Throws UnboundParameter for a missing name.
/// Exact conversions; to_rational throws std::invalid_argument for reals.
[[nodiscard]] Rational to_rational(const Number& n);
[[nodiscard]] Number to_number(const Rational& r);

[[nodiscard]] Rational exact_value(const Expr& e, const Bindings& b);

/// Degree of a parameter expression as a polynomial in `name`; nullopt when
/// the expression is not polynomial in it (division by it, abs, ...).
[[nodiscard]] std::optional<int> poly_degree(const Expr& e, const std::string& name);

/// A predicate over parameters such as "0 < |q| < 1" or "p*q != 0".
class Constraint {
 public:
  Constraint(std::string text, const ParseContext& ctx);
  [[nodiscard]] bool holds(const Bindings& b) const;
  [[nodiscard]] const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::vector<Expr> terms_;
  std::vector<std::string> ops_;
};

/// c^k_{ij} stored densely, 0-based indices.
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(int n);

  [[nodiscard]] int dim() const { return n_; }
  [[nodiscard]] const Rational& at(int i, int j, int k) const { return c_[index(i, j, k)]; }
  Rational& at(int i, int j, int k) { return c_[index(i, j, k)]; }
  /// Sets [e_i, e_j] component k and its antisymmetric partner.
  void set_bracket(int i, int j, int k, const Rational& v);

  /// Bracket of two coordinate vectors.
  [[nodiscard]] Vector bracket(const Vector& x, const Vector& y) const;
  /// Matrix of ad(e_i): (ad e_i)_{k j} = c^k_{ij}, row-major n×n.
  [[nodiscard]] std::vector<Rational> ad(int i) const;

  Bindings bindings;

  friend bool operator==(const StructureConstants& a, const StructureConstants& b) {
    return a.n_ == b.n_ && a.c_ == b.c_;
  }

  /// One "[e_i, e_j] = ..." line per nonzero bracket with i < j, 1-based.
  [[nodiscard]] std::vector<std::string> describe() const;

 private:
  int n_ = 0;
  std::vector<Rational> c_;
  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(k);
  }
};

struct StructureReport {
  bool antisymmetric = true;
  bool jacobi = true;
  std::vector<std::array<int, 3>> failing_triples;  // 0-based, i < j < k
  [[nodiscard]] bool ok() const { return antisymmetric && jacobi; }
};

[[nodiscard]] StructureReport check_structure(const StructureConstants& sc);

/// Coordinates of the Jacobi sum for e_i, e_j, e_k.
[[nodiscard]] Vector jacobi_sum(const StructureConstants& sc, int i, int j, int k);

struct AlgebraProfile {
  std::vector<int> derived_series;        // dims of L, L', L'', ... until stable
  std::vector<int> lower_central_series;  // dims of L, [L,L], [L,[L,L]], ...
  int center_dim = 0;
  std::vector<Rational> killing;  // n×n row-major
  int killing_rank = 0;
  int killing_positive = 0;
  int killing_negative = 0;
  bool solvable = false;
  bool nilpotent = false;
  bool semisimple = false;
};

[[nodiscard]] AlgebraProfile profile(const StructureConstants& sc);

[[nodiscard]] StructureConstants direct_sum(const StructureConstants& a, const StructureConstants& b);

/// Restriction of the brackets to the coordinate subalgebra spanned by `idx`,
/// provided it is closed; nullopt otherwise.
[[nodiscard]] std::optional<StructureConstants> restrict_to(const StructureConstants& sc, const std::vector<int>& idx);

/// Levi decomposition predicate over 0-based index sets.
[[nodiscard]] bool levi_check(const StructureConstants& sc, const std::vector<int>& levi, const std::vector<int>& radical);

/// Row-reduced basis of the span of `rows` (exact).
[[nodiscard]] std::vector<Vector> row_basis(std::vector<Vector> rows);

/// Congruence diagonalisation of a symmetric matrix: (rank, positive, negative).
[[nodiscard]] std::array<int, 3> inertia(std::vector<Rational> sym, int n);

}  // namespace liesym::lie

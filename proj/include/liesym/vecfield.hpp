#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "liesym/expr.hpp"
#include "liesym/liealg.hpp"
#include "liesym/sample.hpp"

namespace liesym {

namespace lie {
class AlgebraCatalog;
}

namespace vf {

/// Raised when a time coefficient picks up x, u or ux dependence.
class ClosureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// a(t) d/dt + b(t,x,u) d/dx + c(t,x,u) d/du.
class VectorField {
 public:
  VectorField() = default;
  VectorField(Expr a, Expr b, Expr c);

  [[nodiscard]] const Expr& a() const { return a_; }
  [[nodiscard]] const Expr& b() const { return b_; }
  [[nodiscard]] const Expr& c() const { return c_; }
  [[nodiscard]] std::array<Expr, 3> coefficients() const { return {a_, b_, c_}; }

  /// Derivative of f along the field.
  [[nodiscard]] Expr apply(const Expr& f) const;

  /// "a*dt + b*dx + c*du" with zero terms omitted; "0" for the zero field.
  [[nodiscard]] std::string to_string() const;

 private:
  Expr a_, b_, c_;
};

[[nodiscard]] VectorField operator+(const VectorField& p, const VectorField& q);
[[nodiscard]] VectorField operator-(const VectorField& p, const VectorField& q);
[[nodiscard]] VectorField operator*(const Expr& k, const VectorField& q);

[[nodiscard]] VectorField commutator(const VectorField& p, const VectorField& q);

/// Σ coeffs[k] fields[k].
[[nodiscard]] VectorField combination(const std::vector<lie::Rational>& coeffs, const std::vector<VectorField>& fields);

struct Realization {
  std::string label;
  std::string target_spec;  // catalog reference, e.g. "A_{3.7}[q=q] A_1"
  lie::StructureConstants target;
  std::vector<VectorField> fields;
  SampleDomain domain;
  ParseContext context;
  std::string quote;
  std::string anchor;  // external reference, e.g. an equation number
  std::vector<std::string> notes;
  std::string source;
};

struct RealizationReport {
  bool ok = true;
  double max_residual = 0.0;
  std::optional<std::pair<int, int>> failing_pair;  // 0-based
  std::optional<Point> witness;
  std::size_t points = 0;
};

/// Checks [e_i, e_j] = Σ_k c^k_ij e_k componentwise at every point.
[[nodiscard]] RealizationReport verify_realization(const Realization& r, const std::vector<Point>& points, double tol);
[[nodiscard]] RealizationReport verify_realization(const Realization& r, const SampleDomain& dom, double tol);
[[nodiscard]] RealizationReport verify_realization(const Realization& r, double tol = 1e-9);

class MissingInverse : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateTransformation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// new t = T(t), new x = X(t,x,u), new u = U(t,x,u). The inverse, when
/// present, expresses old coordinates through new ones, written in the same
/// variables t, x, u.
struct PointTransformation {
  Expr T, X, U;
  std::optional<std::array<Expr, 3>> inverse;
  std::string label;

  PointTransformation() = default;
  PointTransformation(Expr t, Expr x, Expr u, std::optional<std::array<Expr, 3>> inv = std::nullopt,
                      std::string name = {});

  [[nodiscard]] static PointTransformation identity();

  /// Image of (t,x,u); ux is carried through unchanged.
  [[nodiscard]] Point map(const Point& p) const;
  [[nodiscard]] Point map_back(const Point& p) const;

  /// Throws DegenerateTransformation at the first point where dT/dt or
  /// D(X,U)/D(x,u) vanishes (relative 1e-9), or where the declared inverse
  /// does not undo the map.
  void check_nondegenerate(const std::vector<Point>& points) const;

  /// Substitutes the inverse into an expression in old coordinates.
  [[nodiscard]] Expr to_new(const Expr& e) const;
};

[[nodiscard]] VectorField pushforward(const VectorField& q, const PointTransformation& tr);

/// Pushes every generator forward; the target constants are unchanged. The
/// new domain is the image of the old one: guards are pulled back through the
/// inverse and the box is the bounding box of the images of sampled points.
[[nodiscard]] Realization conjugate_realization(const Realization& r, const PointTransformation& tr);

/// Reads one realization file. Keys: label, target, param, slot, let,
/// "e a | b | c" (one per generator, in order), "domain var lo hi",
/// "guard expr", samples, quote, note, anchor. `overrides` replaces declared
/// parameter values before the target and generators are read.
[[nodiscard]] Realization parse_realization(const std::string& path, const lie::AlgebraCatalog& algebras,
                                            const std::map<std::string, Number>& overrides = {});

/// Every realization under <root>/realizations, sorted by file name.
[[nodiscard]] std::vector<Realization> load_realizations(const std::string& root, const lie::AlgebraCatalog& algebras);

/// Match by label, then by anchor. Throws std::out_of_range.
[[nodiscard]] const Realization& find_realization(const std::vector<Realization>& all, const std::string& label);

}  // namespace vf
}  // namespace liesym

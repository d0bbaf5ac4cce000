#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "liesym/expr.hpp"
#include "liesym/sample.hpp"
#include "liesym/vecfield.hpp"

namespace liesym::ds {

/// u_t = F(t,x,u,ux) u_xx + G(t,x,u,ux) on a sampling domain.
struct EquationSpec {
  std::string label;
  Expr F;
  Expr G;
  SampleDomain domain;

  /// Throws std::invalid_argument if F vanishes or is singular at any point.
  void check_nondegenerate(const std::vector<Point>& points) const;
};

/// The two determining equations, each moved to one side.
struct ResidualExprs {
  Expr r1;  // coefficient of u_xx
  Expr r2;  // remainder
};

[[nodiscard]] ResidualExprs determining_expressions(const EquationSpec& eq, const vf::VectorField& q);

struct Residuals {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Throws SingularPoint when either residual is singular at `p`.
[[nodiscard]] Residuals determining_residuals(const EquationSpec& eq, const vf::VectorField& q, const Point& p);

struct InvarianceReport {
  bool ok = true;
  double max_residual = 0.0;
  std::optional<std::size_t> failing_generator;  // 0-based
  int failing_equation = 0;                      // 1 or 2
  std::optional<Point> witness;
  std::size_t points = 0;
};

[[nodiscard]] InvarianceReport check_invariance(const EquationSpec& eq, const std::vector<vf::VectorField>& fields,
                                                const std::vector<Point>& points, double tol);
[[nodiscard]] InvarianceReport check_invariance(const EquationSpec& eq, const std::vector<vf::VectorField>& fields,
                                                const SampleDomain& dom, double tol);

/// Trial functions: `time` spans a(t), `space` spans both b and c.
struct AnsatzBasis {
  std::string name;
  std::vector<Expr> time;
  std::vector<Expr> space;

  [[nodiscard]] std::size_t size() const { return time.size() + 2 * space.size(); }
  /// The field of unknown number k: time terms first, then b terms, then c terms.
  [[nodiscard]] vf::VectorField unit_field(std::size_t k) const;
  [[nodiscard]] vf::VectorField field(const std::vector<double>& coeffs) const;
};

/// Monomials t^i x^j u^k with i + j + k <= degree; time part 1..t^degree.
[[nodiscard]] AnsatzBasis polynomial_basis(int degree);
/// Polynomial basis enlarged by x^-1 times monomials of degree < degree.
[[nodiscard]] AnsatzBasis laurent_basis(int degree);
/// {1, t, t^2} for time; {1, t, u, sin x, cos x, tan u sin x, tan u cos x} for space.
[[nodiscard]] AnsatzBasis trigonometric_basis();
/// Polynomial basis enlarged by exp(x) and exp(-x).
[[nodiscard]] AnsatzBasis exponential_basis(int degree);
/// Looks a library up by name ("polynomial", "laurent", "trigonometric", "exponential").
[[nodiscard]] AnsatzBasis basis_by_name(const std::string& name, int degree);
[[nodiscard]] const std::vector<std::string>& basis_names();

/// Rank of the sampled Gram matrix equals the basis size.
[[nodiscard]] bool basis_independent(const AnsatzBasis& basis, const std::vector<Point>& points);

/// Outcome of the sampled nullspace estimate.
struct NullspaceReport {
  std::string label;
  std::string basis;
  std::size_t unknowns = 0;
  std::size_t points = 0;
  int dimension = 0;
  std::vector<double> singular_values;  // descending, after equilibration
  double gap_ratio = std::numeric_limits<double>::infinity();
  bool reliable = false;
  bool linear = false;  // u d_u and a nonconstant superposition field both present
  bool recheck_ok = true;
  std::vector<std::vector<double>> coefficients;  // reduced nullspace basis
  std::vector<vf::VectorField> generators;
  std::string verdict;
};

struct EstimateOptions {
  std::size_t points = 0;  // 0 selects 4 x unknowns
  double rank_tol = 1e-8;
  double gap_floor = 1e6;
  double recheck_tol = 1e-6;
};

[[nodiscard]] NullspaceReport estimate_symmetry_dimension(const EquationSpec& eq, const AnsatzBasis& basis,
                                                          const EstimateOptions& opt = {});

/// Relative distance of q from the span of `fields`, measured on the
/// stacked coefficient values at `points` after orthonormalisation.
[[nodiscard]] double span_residual(const std::vector<vf::VectorField>& fields, const vf::VectorField& q,
                                   const std::vector<Point>& points);

/// The equation in the coordinates of `tr` (inverse required): the new F and G
/// and a domain covering the image of the old one, restricted by guards that
/// pull back the old box and guards.
[[nodiscard]] EquationSpec transform_equation(const EquationSpec& eq, const vf::PointTransformation& tr);

/// (k - 2 m w) F(w) = (n + p w + m w^2) F'(w), with w read from the ux
/// coordinate of the sampled points.
[[nodiscard]] bool check_ftilde_ode(const Expr& ftilde, double k, double m, double n, double p,
                                    const SampleDomain& dom, double tol = 1e-8);

}  // namespace liesym::ds

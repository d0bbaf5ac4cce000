#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "liesym/detsys.hpp"

namespace liesym::ds {

namespace {

const Expr kT = Expr::variable(Var::t);
const Expr kX = Expr::variable(Var::x);
const Expr kU = Expr::variable(Var::u);

Expr power(const Expr& v, int n) {
  if (n == 0) return Expr::constant(1);
  if (n == 1) return v;
  return pow(v, Expr::constant(n));
}

Expr monomial(int i, int j, int k) {
  Expr out = Expr::constant(1);
  bool first = true;
  for (const auto& [v, n] : {std::pair{kT, i}, std::pair{kX, j}, std::pair{kU, k}}) {
    if (n == 0) continue;
    out = first ? power(v, n) : out * power(v, n);
    first = false;
  }
  return out;
}

std::vector<Expr> time_powers(int degree) {
  std::vector<Expr> out;
  for (int i = 0; i <= degree; ++i) out.push_back(power(kT, i));
  return out;
}

std::vector<Expr> monomials(int degree) {
  std::vector<Expr> out;
  for (int total = 0; total <= degree; ++total)
    for (int i = total; i >= 0; --i)
      for (int j = total - i; j >= 0; --j) out.push_back(monomial(i, j, total - i - j));
  return out;
}

// Small-denominator rational within 1e-9 of v, otherwise v itself.
Number tidy(double v) {
  for (std::int64_t den = 1; den <= 24; ++den) {
    const double n = std::round(v * static_cast<double>(den));
    if (std::abs(n) < 1e12 && std::abs(v - n / static_cast<double>(den)) <= 1e-9 * std::max(1.0, std::abs(v)))
      return Number(static_cast<std::int64_t>(n), den);
  }
  return Number::real(v);
}

Expr weighted_sum(const std::vector<Expr>& terms, const double* coeffs) {
  Expr out;
  bool first = true;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    const bool negative = coeffs[k] < 0.0;
    const Number c = tidy(std::abs(coeffs[k]));
    const Expr term = c.exact() && c == Number(1) ? terms[k] : Expr::constant(c) * terms[k];
    if (first && negative)
      out = c.exact() && c == Number(1) ? -term : Expr::constant(tidy(coeffs[k])) * terms[k];
    else if (first)
      out = term;
    else
      out = negative ? out - term : out + term;
    first = false;
  }
  return out;
}

// Row-reduced basis of the row space of y (rows = vectors), pivots chosen left to right.
Eigen::MatrixXd reduce(Eigen::MatrixXd y) {
  const Eigen::Index rows = y.rows(), cols = y.cols();
  const double big = y.cwiseAbs().maxCoeff();
  Eigen::Index r = 0;
  for (Eigen::Index col = 0; col < cols && r < rows; ++col) {
    Eigen::Index best = r;
    for (Eigen::Index i = r + 1; i < rows; ++i)
      if (std::abs(y(i, col)) > std::abs(y(best, col))) best = i;
    if (std::abs(y(best, col)) <= 1e-6 * big) continue;
    y.row(r).swap(y.row(best));
    y.row(r) /= y(r, col);
    for (Eigen::Index i = 0; i < rows; ++i)
      if (i != r) y.row(i) -= y(i, col) * y.row(r);
    ++r;
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double m = y.row(i).cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < cols; ++j)
      if (std::abs(y(i, j)) <= 1e-10 * m) y(i, j) = 0.0;
  }
  return y;
}

std::size_t numeric_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

vf::VectorField AnsatzBasis::unit_field(std::size_t k) const {
  const std::size_t nt = time.size(), ns = space.size();
  if (k < nt) return {time[k], Expr(), Expr()};
  if (k < nt + ns) return {Expr(), space[k - nt], Expr()};
  if (k < nt + 2 * ns) return {Expr(), Expr(), space[k - nt - ns]};
  throw std::out_of_range("ansatz unknown out of range");
}

vf::VectorField AnsatzBasis::field(const std::vector<double>& coeffs) const {
  if (coeffs.size() != size()) throw std::invalid_argument("ansatz coefficient count mismatch");
  const std::size_t nt = time.size(), ns = space.size();
  return {weighted_sum(time, coeffs.data()), weighted_sum(space, coeffs.data() + nt),
          weighted_sum(space, coeffs.data() + nt + ns)};
}

AnsatzBasis polynomial_basis(int degree) {
  if (degree < 0) throw std::invalid_argument("negative ansatz degree");
  return {"polynomial", time_powers(degree), monomials(degree)};
}

AnsatzBasis laurent_basis(int degree) {
  AnsatzBasis out = polynomial_basis(degree);
  out.name = "laurent";
  const Expr inv = Expr::constant(1) / kX;
  for (int total = 0; total < degree; ++total)
    for (int i = total; i >= 0; --i) {
      const int k = total - i;
      const Expr m = monomial(i, 0, k);
      out.space.push_back(total == 0 ? inv : m / kX);
    }
  return out;
}

AnsatzBasis trigonometric_basis() {
  const Expr sx = apply(Func::sin, kX), cx = apply(Func::cos, kX), tu = apply(Func::tan, kU);
  return {"trigonometric", time_powers(2), {Expr::constant(1), kT, kU, sx, cx, tu * sx, tu * cx}};
}

AnsatzBasis exponential_basis(int degree) {
  AnsatzBasis out = polynomial_basis(degree);
  out.name = "exponential";
  out.space.push_back(apply(Func::exp, kX));
  out.space.push_back(apply(Func::exp, -kX));
  return out;
}

const std::vector<std::string>& basis_names() {
  static const std::vector<std::string> names{"polynomial", "laurent", "trigonometric", "exponential"};
  return names;
}

AnsatzBasis basis_by_name(const std::string& name, int degree) {
  if (name == "polynomial") return polynomial_basis(degree);
  if (name == "laurent") return laurent_basis(degree);
  if (name == "trigonometric") return trigonometric_basis();
  if (name == "exponential") return exponential_basis(degree);
  throw std::invalid_argument("unknown ansatz library '" + name + "'");
}

bool basis_independent(const AnsatzBasis& basis, const std::vector<Point>& points) {
  auto gram_full_rank = [&](const std::vector<Expr>& fs) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(fs.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = 0; j < fs.size(); ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval(fs[j], points[i]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double n = m.col(j).norm();
      if (n > 0) m.col(j) /= n;
    }
    const Eigen::MatrixXd gram = m.transpose() * m;
    return numeric_rank(gram, 1e-12) == fs.size();
  };
  return gram_full_rank(basis.time) && gram_full_rank(basis.space);
}

NullspaceReport estimate_symmetry_dimension(const EquationSpec& eq, const AnsatzBasis& basis,
                                            const EstimateOptions& opt) {
  const std::size_t n = basis.size();
  NullspaceReport rep;
  rep.label = eq.label;
  rep.basis = basis.name;
  rep.unknowns = n;

  SampleDomain dom = eq.domain;
  dom.count = opt.points ? opt.points : 4 * n;
  if (dom.count < 2 * n) throw std::invalid_argument("the estimator needs at least twice as many points as unknowns");
  const std::vector<Point> points = dom.draw();

  std::vector<ResidualExprs> columns;
  columns.reserve(n);
  for (std::size_t k = 0; k < n; ++k) columns.push_back(determining_expressions(eq, basis.unit_field(k)));

  std::vector<Eigen::RowVectorXd> rows;
  rows.reserve(2 * points.size());
  std::vector<Point> used;
  for (const Point& p : points) {
    Eigen::RowVectorXd r1(static_cast<Eigen::Index>(n)), r2(static_cast<Eigen::Index>(n));
    bool singular = false;
    for (std::size_t k = 0; k < n && !singular; ++k) {
      const Evaluation e1 = evaluate(columns[k].r1, p);
      const Evaluation e2 = evaluate(columns[k].r2, p);
      singular = e1.singular || e2.singular;
      r1(static_cast<Eigen::Index>(k)) = e1.value;
      r2(static_cast<Eigen::Index>(k)) = e2.value;
    }
    if (singular) continue;
    used.push_back(p);
    for (auto* r : {&r1, &r2}) {
      const double m = r->cwiseAbs().maxCoeff();
      if (m > 0) *r /= m;
      rows.push_back(*r);
    }
  }
  rep.points = used.size();
  if (used.size() < 2 * n) throw DomainExhausted(eq.label + ": too many sampled points are singular");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = rows[i];
  // Columns at rounding level are exact zeros; scaling them up would turn
  // noise into a spurious independent direction.
  Eigen::VectorXd colscale = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  const double widest = a.colwise().norm().maxCoeff();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double c = a.col(j).norm();
    if (c <= 1e-12 * widest) {
      a.col(j).setZero();
    } else {
      colscale(j) = c;
      a.col(j) /= c;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  rep.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() ? s(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > opt.rank_tol * smax) ++rank;
  rep.dimension = static_cast<int>(n - rank);
  if (rank > 0 && rank < n) {
    const double dropped = s(static_cast<Eigen::Index>(rank));
    rep.gap_ratio = dropped > 0 ? s(static_cast<Eigen::Index>(rank) - 1) / dropped : std::numeric_limits<double>::infinity();
  }
  rep.reliable = rep.gap_ratio >= opt.gap_floor;

  const auto d = static_cast<Eigen::Index>(rep.dimension);
  if (d > 0) {
    Eigen::MatrixXd y = svd.matrixV().rightCols(d).transpose();
    for (Eigen::Index j = 0; j < y.cols(); ++j) y.col(j) /= colscale(j);
    y = reduce(y);
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      std::vector<double> c(y.cols());
      for (Eigen::Index j = 0; j < y.cols(); ++j) c[static_cast<std::size_t>(j)] = y(i, j);
      rep.generators.push_back(basis.field(c));
      rep.coefficients.push_back(std::move(c));
    }
    rep.recheck_ok = check_invariance(eq, rep.generators, used, opt.recheck_tol).ok;

    // Linear flag: u d_u lies in the span and the pure d_u fields with
    // coefficients free of u form at least a two-dimensional subspace.
    const bool scaling = span_residual(rep.generators, {Expr(), Expr(), kU}, used) < 1e-6;
    const std::size_t nt = basis.time.size(), ns = basis.space.size();
    std::vector<std::size_t> constrained;
    for (std::size_t j = 0; j < nt + ns; ++j) constrained.push_back(j);
    for (std::size_t j = 0; j < ns; ++j)
      if (depends_on(basis.space[j], Var::u)) constrained.push_back(nt + ns + j);
    Eigen::MatrixXd k(static_cast<Eigen::Index>(constrained.size()), d);
    for (std::size_t i = 0; i < constrained.size(); ++i)
      for (Eigen::Index g = 0; g < d; ++g)
        k(static_cast<Eigen::Index>(i), g) = y(g, static_cast<Eigen::Index>(constrained[i]));
    const std::size_t superposition = static_cast<std::size_t>(d) - numeric_rank(k, 1e-8);
    rep.linear = scaling && superposition >= 2;
  }

  const std::string dim = std::to_string(rep.dimension);
  if (!rep.reliable)
    rep.verdict = "estimate unreliable: singular-value gap " + format_double(rep.gap_ratio) + " below " +
                  format_double(opt.gap_floor);
  else if (!rep.recheck_ok)
    rep.verdict = "recovered generators failed re-verification";
  else if (rep.linear)
    rep.verdict = "linear equation: infinite-dimensional symmetry, estimate is basis-bounded (" + dim +
                  " generators within the " + basis.name + " basis)";
  else
    rep.verdict = "dimension " + dim + " within the " + basis.name + " basis (basis-bounded lower bound)";
  return rep;
}

double span_residual(const std::vector<vf::VectorField>& fields, const vf::VectorField& q,
                     const std::vector<Point>& points) {
  const auto m = static_cast<Eigen::Index>(3 * points.size());
  Eigen::MatrixXd a(m, static_cast<Eigen::Index>(fields.size()));
  Eigen::VectorXd v(m);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto qc = q.coefficients();
    for (std::size_t c = 0; c < 3; ++c) {
      const auto row = static_cast<Eigen::Index>(3 * i + c);
      v(row) = eval(qc[c], points[i]);
      for (std::size_t k = 0; k < fields.size(); ++k)
        a(row, static_cast<Eigen::Index>(k)) = eval(fields[k].coefficients()[c], points[i]);
    }
  }
  const double norm = v.norm();
  if (norm == 0.0) return 0.0;
  if (fields.empty()) return 1.0;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd qmat = qr.householderQ() * Eigen::MatrixXd::Identity(m, a.cols());
  return (v - qmat * (qmat.transpose() * v)).norm() / norm;
}

}  // namespace liesym::ds

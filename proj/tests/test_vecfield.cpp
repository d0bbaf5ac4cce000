#include <doctest.h>

#include <random>

#include "liesym/algcatalog.hpp"
#include "liesym/vecfield.hpp"

using namespace liesym;
using namespace liesym::vf;

namespace {

const lie::AlgebraCatalog& algebras() {
  static const lie::AlgebraCatalog c = lie::AlgebraCatalog::load(LIESYM_DEFAULT_CATALOG_DIR);
  return c;
}

const std::vector<Realization>& realizations() {
  static const std::vector<Realization> r = load_realizations(LIESYM_DEFAULT_CATALOG_DIR, algebras());
  return r;
}

VectorField field(const std::string& a, const std::string& b, const std::string& c) {
  return {parse(a), parse(b), parse(c)};
}

SampleDomain box(double tlo, double thi, double xlo, double xhi, double ulo, double uhi, std::size_t count = 200) {
  SampleDomain d;
  d.set(Var::t, tlo, thi);
  d.set(Var::x, xlo, xhi);
  d.set(Var::u, ulo, uhi);
  d.count = count;
  return d;
}

bool same_field(const VectorField& p, const VectorField& q, const SampleDomain& dom, double tol = 1e-10) {
  const auto d = (p - q).coefficients();
  const auto pts = dom.draw();
  return is_zero(d[0], pts, tol).zero && is_zero(d[1], pts, tol).zero && is_zero(d[2], pts, tol).zero;
}

// Affine-in-(x,u) transformations with a sinusoidal shift; closed-form inverse.
PointTransformation random_transformation(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
  int a1 = 0;
  while (a1 == 0) a1 = pick(-2, 2);
  int b1 = 0, b2 = 0, c1 = 0, c2 = 0;
  while (b1 * c2 - b2 * c1 == 0) {
    b1 = pick(-2, 2);
    b2 = pick(-2, 2);
    c1 = pick(-2, 2);
    c2 = pick(-2, 2);
  }
  const int a0 = pick(-2, 2), b3 = pick(-2, 2), c3 = pick(-2, 2);
  const int det = b1 * c2 - b2 * c1;
  const Expr t = Expr::variable(Var::t), x = Expr::variable(Var::x), u = Expr::variable(Var::u);
  auto k = [](int n) { return Expr::constant(n); };
  auto q = [](int n, int d) { return Expr::constant(Number(n, d)); };
  const Expr T = k(a1) * t + k(a0);
  const Expr X = k(b1) * x + k(b2) * u + k(b3) * apply(Func::sin, t);
  const Expr U = k(c1) * x + k(c2) * u + k(c3) * t;
  const Expr t_old = (t - k(a0)) / k(a1);
  const Expr p = x - k(b3) * apply(Func::sin, t_old);
  const Expr r = u - k(c3) * t_old;
  const Expr x_old = q(c2, det) * p - q(b2, det) * r;
  const Expr u_old = q(-c1, det) * p + q(b1, det) * r;
  return PointTransformation(T, X, U, std::array<Expr, 3>{t_old, x_old, u_old}, "random");
}

VectorField random_field(std::mt19937_64& rng) {
  static const char* times[] = {"0", "1", "t", "t^2", "sin(t)", "exp(t/2)"};
  static const char* spaces[] = {"0", "1", "x", "u", "x*u", "sin(x)", "exp(u/3)", "t*x", "u^2", "cos(t+x)"};
  auto any = [&](const auto& list, std::size_t n) { return std::string(list[rng() % n]); };
  return field(any(times, 6), any(spaces, 10) + "+" + any(spaces, 10), any(spaces, 10) + "-" + any(spaces, 10));
}

}  // namespace

TEST_CASE("commutator examples") {
  const SampleDomain dom = box(-1, 1, -3, 3, -1.2, 1.2);
  const VectorField dx = field("0", "1", "0");
  const VectorField q2 = field("0", "tan(u)*sin(x)", "cos(x)");
  CHECK(same_field(commutator(dx, q2), field("0", "tan(u)*cos(x)", "-sin(x)"), dom));
  CHECK(same_field(commutator(q2, q2), field("0", "0", "0"), dom));
  CHECK(same_field(commutator(field("2*t", "x", "0"), field("1", "0", "0")), field("-2", "0", "0"), dom));
}

TEST_CASE("time coefficients must not depend on x or u") {
  CHECK_THROWS_AS(field("x", "0", "0"), ClosureError);
  CHECK_THROWS_AS(field("t*u", "0", "0"), ClosureError);
  CHECK_THROWS_AS(field("1", "ux", "0"), ClosureError);
  CHECK_NOTHROW(field("sin(t)", "x*u", "exp(t*x)"));
}

TEST_CASE("property: antisymmetry and Jacobi for random admissible fields") {
  std::mt19937_64 rng(7);
  const SampleDomain dom = box(-1, 1, -1, 1, -1, 1, 100);
  const auto pts = dom.draw();
  for (int trial = 0; trial < 20; ++trial) {
    const VectorField p = random_field(rng), q = random_field(rng), r = random_field(rng);
    const VectorField anti = commutator(p, q) + commutator(q, p);
    const VectorField jac =
        commutator(commutator(p, q), r) + commutator(commutator(q, r), p) + commutator(commutator(r, p), q);
    for (const auto& e : anti.coefficients()) CHECK(is_zero(e, pts, 1e-7).zero);
    for (const auto& e : jac.coefficients()) CHECK(is_zero(e, pts, 1e-7).zero);
  }
}

TEST_CASE("catalog realizations close under their target constants") {
  REQUIRE(realizations().size() >= 50);
  for (const auto& r : realizations()) {
    const auto rep = verify_realization(r, 1e-9);
    CHECK_MESSAGE(rep.ok, r.label);
    CHECK_MESSAGE(rep.points >= 200, r.label);
    CHECK(rep.max_residual < 1e-9);
  }
}

TEST_CASE("a mutated so(3) realization is rejected with the failing pair") {
  Realization r = find_realization(realizations(), "so3");
  r.fields[1] = field("0", "tan(u)*sin(x)", "sin(x)");
  const auto rep = verify_realization(r, 1e-9);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.failing_pair);
  CHECK(rep.failing_pair->first == 0);
  CHECK(rep.failing_pair->second == 1);
  CHECK(rep.witness.has_value());
}

TEST_CASE("projective realizations on a single axis are genuine sl(2) realizations") {
  CHECK(verify_realization(find_realization(realizations(), "sl2.t-only"), 1e-9).ok);
  CHECK(verify_realization(find_realization(realizations(), "sl2.x-only"), 1e-9).ok);
}

TEST_CASE("pushforward examples") {
  const Expr t = Expr::variable(Var::t), x = Expr::variable(Var::x), u = Expr::variable(Var::u);
  const SampleDomain pos = box(0.5, 2, -1, 1, -1, 1);

  const PointTransformation scale(Expr::constant(2) * t, x, u, std::array<Expr, 3>{t / Expr::constant(2), x, u});
  CHECK(same_field(pushforward(field("1", "0", "0"), scale), field("2", "0", "0"), pos));

  const PointTransformation logt(apply(Func::ln, t), x, u, std::array<Expr, 3>{apply(Func::exp, t), x, u});
  CHECK(same_field(pushforward(field("t", "0", "0"), logt), field("1", "0", "0"), pos));

  const PointTransformation hodograph(t, u, x, std::array<Expr, 3>{t, u, x}, "hodograph");
  CHECK(same_field(pushforward(field("0", "u", "0"), hodograph), field("0", "0", "x"), pos));

  const PointTransformation no_inverse(t, x, u);
  CHECK_THROWS_AS((void)pushforward(field("1", "0", "0"), no_inverse), MissingInverse);
}

TEST_CASE("degenerate transformations are detected") {
  const Expr t = Expr::variable(Var::t), x = Expr::variable(Var::x), u = Expr::variable(Var::u);
  const PointTransformation flat(t, x + u, Expr::constant(2) * (x + u));
  CHECK_THROWS_AS(flat.check_nondegenerate(box(-1, 1, -1, 1, -1, 1, 10).draw()), DegenerateTransformation);
  CHECK_NOTHROW(PointTransformation::identity().check_nondegenerate(box(-1, 1, -1, 1, -1, 1, 10).draw()));
}

TEST_CASE("conjugation examples") {
  const Realization& r = find_realization(realizations(), "sl2.3");
  const Realization same = conjugate_realization(r, PointTransformation::identity());
  for (std::size_t i = 0; i < r.fields.size(); ++i) CHECK(same_field(same.fields[i], r.fields[i], r.domain));

  const Expr t = Expr::variable(Var::t), x = Expr::variable(Var::x), u = Expr::variable(Var::u);
  const PointTransformation shift(t, x, u + t, std::array<Expr, 3>{t, x, u - t});
  const Realization& a21 = find_realization(realizations(), "A^1_{2.1}");
  const Realization moved = conjugate_realization(a21, shift);
  CHECK(same_field(moved.fields[0], field("1", "0", "1"), moved.domain));
  CHECK(same_field(moved.fields[1], field("0", "0", "1"), moved.domain));
  CHECK(moved.target == a21.target);
  CHECK(verify_realization(moved, 1e-9).ok);
}

TEST_CASE("property: conjugated catalog realizations keep their constants") {
  std::mt19937_64 rng(2024);
  std::vector<PointTransformation> family;
  for (int i = 0; i < 50; ++i) family.push_back(random_transformation(rng));
  std::size_t checked = 0;
  for (std::size_t i = 0; i < realizations().size(); ++i) {
    const Realization& r = realizations()[i];
    // Every realization meets five transformations; the first one meets all fifty.
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (i != 0 && (j + i) % 10 != 0) continue;
      Realization c = conjugate_realization(r, family[j]);
      c.domain.count = 50;
      const auto rep = verify_realization(c, 1e-8);
      CHECK_MESSAGE(rep.ok, r.label << " under transformation " << j << " residual " << rep.max_residual);
      ++checked;
    }
  }
  CHECK(checked >= 50 + 5 * (realizations().size() - 1));
}

TEST_CASE("pushforward round trip through the inverse transformation") {
  std::mt19937_64 rng(99);
  const SampleDomain dom = box(-1, 1, -1, 1, -1, 1, 50);
  for (int i = 0; i < 25; ++i) {
    const PointTransformation tr = random_transformation(rng);
    const PointTransformation back((*tr.inverse)[0], (*tr.inverse)[1], (*tr.inverse)[2],
                                   std::array<Expr, 3>{tr.T, tr.X, tr.U});
    const VectorField q = random_field(rng);
    CHECK(same_field(pushforward(pushforward(q, tr), back), q, dom, 1e-10));
  }
}

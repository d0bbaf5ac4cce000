#include <doctest.h>

#include <cmath>
#include <random>

#include "liesym/expr.hpp"
#include "liesym/sample.hpp"

using namespace liesym;

namespace {

SampleDomain box_domain(double lo, double hi, std::uint64_t seed = 7) {
  SampleDomain d;
  for (auto v : {Var::t, Var::x, Var::u, Var::ux}) d.set(v, lo, hi);
  d.seed = seed;
  return d;
}

// Random trees built only from operations that stay finite and smooth on
// [-1, 1]^4, so finite differences are a fair oracle.
class RandomExpr {
 public:
  explicit RandomExpr(std::uint64_t seed) : rng_(seed) {}

  Expr make(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    const Expr a = make(depth - 1);
    switch (pick(11)) {
      case 0: return a + make(depth - 1);
      case 1: return a - make(depth - 1);
      case 2: return a * make(depth - 1);
      case 3: return a / (Expr::constant(2) + apply(Func::sin, make(depth - 1)));
      case 4: return apply(Func::sin, a);
      case 5: return apply(Func::cos, a);
      case 6: return apply(Func::arctan, a);
      case 7: return apply(Func::exp, apply(Func::sin, a));
      case 8: return apply(Func::sqrt, Expr::constant(1) + a * a);
      case 9: return apply(Func::ln, Expr::constant(3) + apply(Func::cos, a));
      default: return pow(Expr::constant(2) + apply(Func::sin, a), Expr::constant(Number(pick(5) + 1, 2)));
    }
  }

 private:
  std::mt19937_64 rng_;

  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

  Expr leaf() {
    static const Var vars[] = {Var::t, Var::x, Var::u, Var::ux};
    if (pick(3) == 0) return Expr::constant(Number(pick(7) - 3, pick(3) + 1));
    return Expr::variable(vars[pick(4)]);
  }
};

Expr central_difference(const Expr& e, Var v, double h) {
  const Expr var = Expr::variable(v);
  const Expr plus = substitute(e, {{v, var + Expr::constant(Number::real(h))}});
  const Expr minus = substitute(e, {{v, var - Expr::constant(Number::real(h))}});
  return (plus - minus) * Expr::constant(Number::real(1.0 / (2.0 * h)));
}

}  // namespace

TEST_CASE("numbers stay exact and print as rationals") {
  CHECK((Number(1, 3) + Number(1, 6)) == Number(1, 2));
  CHECK(Number::from_string("0.25") == Number(1, 4));
  CHECK(Number::from_string("-3/6") == Number(-1, 2));
  CHECK_FALSE(Number::from_string("1e-3")->exact());
  CHECK(Number(-5, 2).to_string() == "-5/2");
  CHECK(power(Number(2, 3), Number(-2)) == Number(9, 4));
  CHECK_FALSE(power(Number(-2), Number(1, 2)).has_value());
}

TEST_CASE("parse: zero, macro form and table entry") {
  CHECK(parse("0").is_zero_constant());

  ParseContext ctx;
  ctx.declare("let w = ux*sec(u)");
  const Expr f = parse("sec(u)^2/(1+w^2)", ctx);
  const Point p = make_point(0.1, 0.2, 0.3, 0.7);
  const double w = 0.7 / std::cos(0.3);
  CHECK(eval(f, p) == doctest::Approx(1.0 / (std::cos(0.3) * std::cos(0.3)) / (1 + w * w)).epsilon(1e-14));

  ParseContext k;
  k.declare("param k=1/2");
  const Expr g = parse("exp(2*k*arctan(ux))/(1+ux^2)", k);
  CHECK(eval(g, p) == doctest::Approx(std::exp(std::atan(0.7)) / 1.49).epsilon(1e-14));
}

TEST_CASE("parse errors carry a byte offset") {
  try {
    (void)parse("sin(x) + * u");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 9);
  }
  CHECK_THROWS_AS((void)parse("foo(x)"), ParseError);
  CHECK_THROWS_AS((void)parse("s + 1"), ParseError);
  CHECK_THROWS_AS((void)parse("(x"), ParseError);
}

TEST_CASE("typeset operators are accepted") {
  const Expr e = parse("2·x − u×t");
  CHECK(eval(e, make_point(3, 5, 7, 0)) == doctest::Approx(10 - 21));
}

TEST_CASE("print/parse round trip") {
  ParseContext ctx;
  ctx.declare("param k=-1/3");
  ctx.declare("slot Ftilde");
  ctx.declare("bind Gtilde = 1+exp(s/3)");
  const char* samples[] = {
      "-x^2",          "(-2)*u",          "x-(u-t)",        "x/(u*t)",         "(x^u)^t",
      "x^u^t",         "2^(-1)",          "-(-x)",          "k*ux^(k-1)",      "Ftilde(2*u - x*ux)",
      "Ftilde''(t)*x", "Gtilde(ux*sec(u))", "1e-3*x",       "abs(t*ux)^(1/3)", "-(x+u)*(t-1)",
      "exp(-u)/(-t)",  "ln(abs(t))",     "x - -u",         "x*(-1/2)",        "sign(x)*abs(x)",
  };
  for (const char* text : samples) {
    const Expr e = parse(text, ctx);
    const std::string printed = e.to_string();
    CAPTURE(text);
    CAPTURE(printed);
    CHECK(structurally_equal(parse(printed, ctx), e));
  }
}

TEST_CASE("diff examples") {
  const Point p = make_point(0.3, 0.4, 0.5, 0.6);
  const Expr d1 = diff(parse("tan(u)*sin(x)"), Var::x);
  CHECK(is_zero(d1 - parse("tan(u)*cos(x)"), box_domain(-1, 1), 1e-12).zero);
  const Expr d2 = diff(parse("ux*sec(u)"), Var::u);
  CHECK(is_zero(d2 - parse("ux*sec(u)*tan(u)"), box_domain(-1, 1), 1e-12).zero);

  ParseContext ctx;
  ctx.declare("slot Ftilde");
  const Expr d3 = diff(parse("Ftilde(2*u - x*ux)", ctx), Var::u);
  CHECK(structurally_equal(d3, parse("Ftilde'(2*u - x*ux)*2", ctx)));
  CHECK(unbound_slots(d3) == std::vector<std::string>{"Ftilde"});
  CHECK_THROWS_AS((void)evaluate(d3, p), std::invalid_argument);

  const Expr bound = bind_slots(d3, {{"Ftilde", parse("sin(s)", [] {
                                        ParseContext c;
                                        c.allow_slot_argument = true;
                                        return c;
                                      }())}});
  CHECK(eval(bound, p) == doctest::Approx(2 * std::cos(1.0 - 0.24)));
}

TEST_CASE("derivative of abs is sign and singular at zero") {
  const Expr d = diff(parse("abs(x)"), Var::x);
  CHECK(eval(d, make_point(0, -0.5, 0, 0)) == -1.0);
  CHECK_THROWS_AS((void)eval(d, make_point(0, 0, 0, 0)), SingularPoint);
}

TEST_CASE("is_zero examples") {
  SampleDomain d = box_domain(-1, 1);
  CHECK(is_zero(parse("sec(u)^2 - 1 - tan(u)^2"), d, 1e-8).zero);
  CHECK(is_zero(parse("tan(u)*cos(x) - tan(u)*cos(x)"), d, 1e-8).zero);

  SampleDomain narrow = box_domain(-1, 1);
  narrow.set(Var::x, 0.5, 1.0);
  const ZeroTest r = is_zero(parse("sin(x) - x"), narrow, 1e-8);
  CHECK_FALSE(r.zero);
  REQUIRE(r.witness.has_value());
  CHECK((*r.witness)[1] >= 0.5);
  CHECK(r.witness_residual > 1e-3);
}

TEST_CASE("singularity rules") {
  CHECK(evaluate(parse("tan(u)"), make_point(0, 0, 1.5, 0)).singular);
  CHECK_FALSE(evaluate(parse("tan(u)"), make_point(0, 0, 1.2, 0)).singular);
  CHECK(evaluate(parse("1/(u-1)"), make_point(0, 0, 1.0005, 0)).singular);
  CHECK(evaluate(parse("ln(x)"), make_point(0, -1, 0, 0)).singular);
  CHECK(evaluate(parse("x^(1/2)"), make_point(0, -1, 0, 0)).singular);
  CHECK_FALSE(evaluate(parse("x^3"), make_point(0, -1, 0, 0)).singular);
  CHECK_THROWS_AS((void)is_zero(parse("1/(x-x)"), box_domain(-1, 1), 1e-8), DomainExhausted);
}

TEST_CASE("guards restrict sampling and exhaustion is reported") {
  SampleDomain d = box_domain(-1, 1);
  d.guards.push_back(parse("x - 0.5"));
  for (const Point& p : d.draw()) CHECK(p[1] > 0.5);
  d.guards.push_back(parse("-x - 0.5"));
  CHECK_THROWS_AS((void)d.draw(), DomainExhausted);
}

TEST_CASE("sampling is deterministic for a seed") {
  const SampleDomain a = box_domain(-2, 3, 99);
  const auto p1 = a.draw();
  const auto p2 = a.draw();
  CHECK(p1 == p2);
  SampleDomain b = a;
  b.seed = 100;
  CHECK(b.draw() != p1);
}

TEST_CASE("symbolic derivatives agree with central differences") {
  RandomExpr gen(2024);
  const SampleDomain dom = box_domain(-1, 1, 11);
  const auto points = [&] {
    SampleDomain d = dom;
    d.count = 20;
    return d.draw();
  }();
  const Var vars[] = {Var::t, Var::x, Var::u, Var::ux};
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const Expr e = gen.make(6);
    const Var v = vars[i % 4];
    const Expr residual = diff(e, v) - central_difference(e, v, 1e-6);
    const ZeroTest r = is_zero(residual, points, 1e-4);
    if (!r.zero) {
      ++failures;
      MESSAGE("mismatch for " << e.to_string() << " residual " << r.witness_residual);
    }
  }
  CHECK(failures == 0);
}

#include <doctest.h>

#include <algorithm>

#include "liesym/algcatalog.hpp"

using namespace liesym;
using namespace liesym::lie;

namespace {

const AlgebraCatalog& catalog() {
  static const AlgebraCatalog c = AlgebraCatalog::load(LIESYM_DEFAULT_CATALOG_DIR);
  return c;
}

// Independent oracle: every Jacobi triple expanded from the raw constants.
bool jacobi_oracle(const StructureConstants& sc) {
  const int n = sc.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          Rational s = 0;
          for (int l = 0; l < n; ++l)
            s += sc.at(i, j, l) * sc.at(l, k, m) + sc.at(j, k, l) * sc.at(l, i, m) + sc.at(k, i, l) * sc.at(l, j, m);
          if (s != 0) return false;
        }
  return true;
}

StructureConstants abelian(int n) { return StructureConstants(n); }

}  // namespace

TEST_CASE("so(3) and sl(2) are semisimple Lie algebras") {
  const auto so3 = catalog().instantiate("so3");
  const auto sl2 = catalog().instantiate("sl2");
  CHECK(check_structure(so3).ok());
  CHECK(jacobi_oracle(so3));
  const auto ps = profile(sl2);
  CHECK(ps.semisimple);
  CHECK(ps.killing[0] == 8);
  CHECK(ps.killing_positive == 2);
  CHECK(ps.killing_negative == 1);
  const auto po = profile(so3);
  CHECK(po.semisimple);
  CHECK(po.killing_negative == 3);
}

TEST_CASE("abelian algebras satisfy Jacobi trivially") {
  const auto a = abelian(4);
  CHECK(check_structure(a).ok());
  const auto p = profile(a);
  CHECK(p.center_dim == 4);
  CHECK(p.nilpotent);
  CHECK(p.derived_series == std::vector<int>{4, 0});
}

TEST_CASE("derived series of the two-dimensional non-abelian algebra") {
  const auto p = profile(catalog().instantiate("A_{2.2}"));
  CHECK(p.derived_series == std::vector<int>{2, 1, 0});
  CHECK(p.solvable);
  CHECK_FALSE(p.nilpotent);
}

TEST_CASE("broken constants are reported with the failing triple") {
  const auto& e = catalog().entry("A_{5.20}");
  const auto raw = catalog().instantiate(e, e.defaults, false);
  const auto rep = check_structure(raw);
  CHECK_FALSE(rep.ok());
  CHECK(std::find(rep.failing_triples.begin(), rep.failing_triples.end(), std::array<int, 3>{1, 2, 4}) !=
        rep.failing_triples.end());
  CHECK_FALSE(jacobi_oracle(raw));
  const auto fixed = catalog().instantiate(e, e.defaults, true);
  CHECK(check_structure(fixed).ok());
  CHECK(jacobi_oracle(fixed));
}

TEST_CASE("direct sums") {
  const auto a1 = abelian(1);
  CHECK(direct_sum(a1, a1) == abelian(2));
  const auto a22 = catalog().instantiate("A_{2.2}");
  const auto two = direct_sum(a22, a22);
  CHECK(two.dim() == 4);
  CHECK(check_structure(two).ok());
  CHECK(direct_sum(a22, StructureConstants(0)) == a22);
  CHECK(catalog().resolve_target("A_{2.2} A_{2.2}") == two);
}

TEST_CASE("property: derived dimensions of a direct sum add") {
  const std::vector<std::string> names = {"A_{2.2}", "A_{3.3}", "A_{3.7}", "A_{4.5}", "sl2", "so3"};
  for (const auto& x : names)
    for (const auto& y : names) {
      const auto a = catalog().instantiate(x);
      const auto b = catalog().instantiate(y);
      const auto pa = profile(a).derived_series;
      const auto pb = profile(b).derived_series;
      const auto ps = profile(direct_sum(a, b)).derived_series;
      const auto at = [](const std::vector<int>& s, std::size_t i) { return i < s.size() ? s[i] : s.back(); };
      for (std::size_t i = 0; i < std::max({pa.size(), pb.size(), ps.size()}); ++i)
        CHECK_MESSAGE(at(ps, i) == at(pa, i) + at(pb, i), x << " + " << y);
    }
}

TEST_CASE("semidirect sums assembled from the representation tables") {
  const auto a = catalog().semidirect_from_table("sl2+A_{2.1}");
  CHECK(a.dim() == 5);
  CHECK(jacobi_oracle(a));
  CHECK(levi_check(a, {0, 1, 2}, {3, 4}));
  const auto b = catalog().semidirect_from_table("so3+A_{3.1}");
  CHECK(b.dim() == 6);
  CHECK(jacobi_oracle(b));
  CHECK(levi_check(b, {0, 1, 2}, {3, 4, 5}));
  CHECK_FALSE(levi_check(b, {3, 4, 5}, {0, 1, 2}));
  CHECK_FALSE(levi_check(b, {0, 1}, {2, 3, 4, 5}));
}

TEST_CASE("solvable catalog: no semisimple members, expected nilpotent ones") {
  const std::vector<std::string> nilpotent = {"A_{3.3}", "A_{4.1}", "A_{5.1}", "A_{5.2}",
                                              "A_{5.3}", "A_{5.4}", "A_{5.5}", "A_{5.6}"};
  for (const auto& e : catalog().entries()) {
    if (e.provenance != "appendix1") continue;
    const auto sc = catalog().instantiate(e, e.defaults, true);
    const auto p = profile(sc);
    CHECK_MESSAGE(p.solvable, e.name);
    CHECK_MESSAGE(!p.semisimple, e.name);
    const bool expect = std::find(nilpotent.begin(), nilpotent.end(), e.name) != nilpotent.end();
    if (expect) CHECK_MESSAGE(p.nilpotent, e.name);
  }
}

TEST_CASE("test bindings are distinct and satisfy constraints") {
  for (const auto& e : catalog().entries()) {
    const auto bs = catalog().test_bindings(e);
    if (e.param_order.empty()) continue;
    // A discrete constraint such as epsilon^2 == 1 admits only its own values.
    const bool discrete = std::any_of(e.constraints.begin(), e.constraints.end(),
                                      [](const Constraint& c) { return c.text().find("==") != std::string::npos; });
    CHECK_MESSAGE((bs.size() == 3 || (discrete && bs.size() >= 2)), e.name);
    for (std::size_t i = 0; i < bs.size(); ++i) {
      for (const auto& c : e.constraints) CHECK_MESSAGE(c.holds(bs[i]), e.name << " " << c.text());
      for (std::size_t j = 0; j < i; ++j) CHECK(bs[i] != bs[j]);
    }
  }
}

TEST_CASE("every catalog entry passes its verification, errata included") {
  std::size_t errata = 0;
  for (const auto& v : verify_catalog(catalog())) {
    CHECK_MESSAGE(v.pass, v.name << ": " << v.detail);
    for (const auto& b : v.bindings) {
      const auto& e = catalog().entry(v.name);
      CHECK_MESSAGE(jacobi_oracle(catalog().instantiate(e, b, true)), v.name);
    }
    if (v.errata) {
      ++errata;
      CHECK(!v.raw_failing.empty());
    }
  }
  CHECK(errata == 7);
}

TEST_CASE("unknown names come with suggestions") {
  try {
    (void)catalog().entry("A_{3.77}");
    FAIL("expected UnknownName");
  } catch (const UnknownName& e) {
    REQUIRE(!e.suggestions().empty());
    CHECK(e.suggestions().front().rfind("A_{3.7", 0) == 0);
  }
}

TEST_CASE("constraints and exact evaluation") {
  ParseContext ctx;
  ctx.declare("param q=1/3");
  Constraint c("0 < abs(q) < 1", ctx);
  CHECK(c.holds({{"q", Rational(1, 3)}}));
  CHECK_FALSE(c.holds({{"q", Rational(0)}}));
  CHECK_FALSE(c.holds({{"q", Rational(-1)}}));
  CHECK(exact_value(parse("(1+q)^2/2", ctx), {{"q", Rational(1, 3)}}) == Rational(8, 9));
  CHECK_THROWS_AS((void)exact_value(parse("q", ctx), {}), UnboundParameter);
}

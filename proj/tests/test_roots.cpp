#include <random>

#include "doctest.h"
#include "genuslab/error.hpp"
#include "genuslab/roots.hpp"
#include "support.hpp"

using namespace genuslab;

namespace {

Rational ahat_number(const ManifoldData& m) { return integrate(m, ahat_class(m, 1)).at(0); }

ManifoldData dim8(long p1sq, long p2) { return make_manifold(8, {{{2}, p1sq}, {{0, 1}, p2}}); }

}  // namespace

TEST_CASE("Ahat numbers") {
  CHECK(ahat_number(make_manifold(0, {})) == 1);
  CHECK(ahat_number(test::k3()) == 2);
  CHECK(ahat_number(dim8(4, 7)) == 0);  // quaternionic projective plane
}

TEST_CASE("Ahat in dim 8 matches the closed form (7 p1^2 - 4 p2) / 5760") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> v(-500, 500);
  for (int trial = 0; trial < 10; ++trial) {
    long a = v(rng), b = v(rng);
    CHECK(ahat_number(dim8(a, b)) == test::frac(7 * a - 4 * b, 5760));
  }
}

TEST_CASE("constant class has no top-degree part") {
  ManifoldData m = test::k3();
  CHECK(integrate(m, RootSeries::constant(m.rank(), m.dim, PuiseuxSeries::constant(1, 3))).is_zero());
}

TEST_CASE("Chern character of the complexified tangent bundle") {
  ManifoldData m = make_manifold(8, {{{2}, 1}, {{0, 1}, 1}});
  RootSeries ch = chern_character(tangent_roots(m), m.rank(), m.dim, 1);
  // Degrees here count monomial degree in the roots; odd parts cancel in pairs.
  CHECK(to_pontryagin(ch, 1).empty());
  auto deg1 = to_pontryagin(ch, 2);
  REQUIRE(deg1.size() == 1);
  CHECK(deg1.at({1}).at(0) == 1);
  // Sum of 2 x_i^4 / 4! over the roots is (p1^2 - 2 p2) / 12.
  auto deg2 = to_pontryagin(ch, 4);
  CHECK(deg2.at({2}).at(0) == Rational(1, 12));
  CHECK(deg2.at({0, 1}).at(0) == Rational(-1, 6));
  CHECK(to_pontryagin(ch, 0).at({}).at(0) == 8);
}

TEST_CASE("asymmetric classes are not characteristic") {
  ManifoldData m = test::k3();
  RootSeries lone = chern_character({{1, 0}}, m.rank(), m.dim, 1);
  CHECK_THROWS_AS(to_pontryagin(lone, 1), Error);
}

TEST_CASE("property: Sym_q and Lambda_{-q} are inverse for one root") {
  for (int q_order = 1; q_order <= 6; ++q_order) {
    for (int weight = 1; weight <= 3; ++weight) {
      const std::vector<LinearForm> roots = {{1}};
      RootSeries sym = ch_sym(weight, roots, 1, 6, q_order);
      RootSeries wedge = ch_wedge(PuiseuxSeries::monomial(weight, -1, q_order), roots, 1, 6, q_order);
      CHECK(sym * wedge == RootSeries::constant(1, 6, PuiseuxSeries::constant(1, q_order)));
    }
  }
}

TEST_CASE("property: Chern characters of paired roots are even") {
  for (int l = 1; l <= 3; ++l) {
    ManifoldData m = make_manifold(2 * l, l % 2 == 0 ? std::map<PMonomial, Rational>{{{l / 2}, 1}}
                                                  : std::map<PMonomial, Rational>{});
    RootSeries ch = chern_character(tangent_roots(m), l, 2 * l, 1);
    for (const auto& [e, c] : ch.terms()) {
      for (int k : e) CHECK(k % 2 == 0);
    }
  }
}

TEST_CASE("property: Ahat is multiplicative") {
  ManifoldData k3 = test::k3();
  ManifoldData hp2 = dim8(4, 7);
  CHECK(ahat_number(product_manifold(k3, k3)) == 4);
  CHECK(ahat_number(product_manifold(k3, hp2)) == 0);
  ManifoldData odd = dim8(3, 11);
  CHECK(ahat_number(product_manifold(k3, odd)) == 2 * ahat_number(odd));
  ManifoldData pt = make_manifold(0, {});
  CHECK(ahat_number(product_manifold(pt, k3)) == 2);
}

TEST_CASE("property: integrate is linear") {
  ManifoldData m = dim8(5, -3);
  RootSeries a = ahat_class(m, 4);
  RootSeries b = chern_character(tangent_roots(m), m.rank(), m.dim, 4);
  auto c1 = PuiseuxSeries(0, {1, 2, 3, 4}, 4);
  auto c2 = PuiseuxSeries(0, {Rational(1, 3), 0, -1, 5}, 4);
  CHECK(integrate(m, a.scaled(c1) + b.scaled(c2)) == c1 * integrate(m, a) + c2 * integrate(m, b));
}

TEST_CASE("RootSeries respects the degree cap") {
  RootSeries x = RootSeries::compose(exp_function(1, 4, 1), {1, 1}, 4, 1);
  for (const auto& [e, c] : x.terms()) CHECK(e[0] + e[1] <= 2);
  RootSeries y = x * x;
  for (const auto& [e, c] : y.terms()) CHECK(e[0] + e[1] <= 2);
}

TEST_CASE("monomial and root parsing") {
  CHECK(parse_pmonomial("p1^2*p2") == PMonomial{2, 1});
  CHECK(parse_pmonomial("p2") == PMonomial{0, 1});
  CHECK(parse_pmonomial("1").empty());
  CHECK(pmonomial_text({2, 1}) == "p1^2*p2");
  const std::vector<std::string> names = {"x1", "x2", "x3"};
  CHECK(parse_root("x1+2*x3", names) == LinearForm{1, 0, 2});
  CHECK(parse_root("-x2", names) == LinearForm{0, -1, 0});
  CHECK(parse_root("0", names) == LinearForm{0, 0, 0});
  CHECK(root_text({1, 0, 2}, names) == "x1+2*x3");
  CHECK_THROWS_AS(parse_root("y7", names), Error);
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(make_manifold(3, {}), Error);
  // p1_zero contradicts a nonzero p1 pairing.
  CHECK_THROWS_AS(make_manifold(4, {{{1}, 2}}, false, true), Error);
  ManifoldData incomplete = make_manifold(8, {{{0, 1}, 1}});
  try {
    (void)integrate(incomplete, ahat_class(incomplete, 1));
    FAIL("missing pairing not reported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingPairing);
  }
}

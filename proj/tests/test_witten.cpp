#include "doctest.h"
#include "genuslab/error.hpp"
#include "genuslab/witten.hpp"
#include "k3_oracle.hpp"
#include "support.hpp"

using namespace genuslab;
using test::series;

namespace {

std::vector<ManifoldData> fixtures() {
  return {make_manifold(0, {}),
          test::k3(),
          make_manifold(4, {{{1}, 1}}),
          make_manifold(8, {{{2}, 4}, {{0, 1}, 7}}),
          test::string8(-1440),
          test::string8(5760),
          product_manifold(test::k3(), test::k3())};
}

}  // namespace

TEST_CASE("K3 against the splitting-principle oracle") {
  const int order = 7;
  PuiseuxSeries phi = phi_capital(test::k3(), order);
  std::vector<mpq_class> oracle = test::phi_dim4_oracle(-48, order);
  REQUIRE(phi.offset() == 0);
  for (int k = 0; k < order; ++k) {
    CAPTURE(k);
    CHECK(phi.coeff(k) == oracle[static_cast<std::size_t>(k)]);
  }
  CHECK(phi.coeff(0) == 2);
  CHECK(phi.coeff(1) == -48);
}

TEST_CASE("in dim 4 Phi is p1 times G2") {
  for (long p1 : {-48L, 1L, 24L, 7L}) {
    ManifoldData m = make_manifold(4, {{{1}, p1}});
    CHECK(phi_capital(m, 10) == eisenstein(2, 10).scaled(p1));
  }
}

TEST_CASE("point") {
  ManifoldData pt = make_manifold(0, {});
  CHECK(phi_capital(pt, 5) == PuiseuxSeries::constant(1, 5));
  CHECK(ramond_index(pt, 5) == PuiseuxSeries::constant(1, 5));
  ModularFit fit = modular_weight_check(pt, 3);
  CHECK(fit.member);
}

TEST_CASE("property: constant term is the Ahat number") {
  for (const auto& m : fixtures()) {
    CHECK(phi_capital(m, 2).coeff(0) == integrate(m, ahat_class(m, 1)).at(0));
  }
}

TEST_CASE("property: Ramond index times eta^dim is Phi") {
  for (const auto& m : fixtures()) {
    for (int order : {1, 4, 7}) {
      PuiseuxSeries lhs = ramond_index(m, order) * eta_power(m.dim, order);
      PuiseuxSeries rhs = phi_capital(m, order);
      CHECK(lhs.offset() == rhs.offset());
      CHECK(lhs == rhs);
      CHECK(ramond_index(m, order).offset() == test::frac(-m.dim, 24));
    }
  }
}

TEST_CASE("property: Phi is multiplicative") {
  ManifoldData k3 = test::k3();
  ManifoldData pt = make_manifold(0, {});
  ManifoldData s8 = test::string8(5760);
  CHECK(phi_capital(product_manifold(pt, k3), 6) == phi_capital(k3, 6));
  CHECK(phi_capital(product_manifold(k3, k3), 6) == phi_capital(k3, 6).pow(2));
  CHECK(phi_capital(product_manifold(k3, s8), 5) == phi_capital(k3, 5) * phi_capital(s8, 5));
}

TEST_CASE("Zagier equality under p1 = 0") {
  for (long p2 : {-1440L, 5760L, 3L}) {
    ManifoldData m = test::string8(p2);
    ComparisonReport r = zagier_check(m, 6);
    CHECK(r.equal);
    CHECK_FALSE(r.first_difference);
    CHECK(phi_witten(m, 6) == phi_capital(m, 6));
  }
  // p2 = -1440 gives Ahat = 1 and Phi = E4.
  CHECK(phi_capital(test::string8(-1440), 8) == normalized_eisenstein(4, 8));
}

TEST_CASE("phi_witten needs p1 = 0") {
  try {
    (void)phi_witten(test::k3(), 4);
    FAIL("expected RequiresP1Zero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RequiresP1Zero);
  }
}

TEST_CASE("integrality") {
  IntegralityReport k3 = integrality_check(test::k3(), 6);
  CHECK(k3.integral);
  CHECK_FALSE(k3.offending_index);
  // p1 = 1 gives Ahat = -1/24.
  IntegralityReport bad = integrality_check(make_manifold(4, {{{1}, 1}}), 6);
  CHECK_FALSE(bad.integral);
  REQUIRE(bad.offending_index);
  CHECK(*bad.offending_index == 0);
}

TEST_CASE("modularity") {
  for (long p2 : {-1440L, 5760L}) {
    ModularFit fit = modular_weight_check(test::string8(p2), 8);
    CHECK(fit.member);
    CHECK(fit.weight == 4);
    CHECK(fit.coordinates.at({1, 0}) == test::frac(-p2, 1440));
  }
  ManifoldData flat4 = make_manifold(4, {{{1}, 0}}, false, true);
  CHECK(phi_witten(flat4, 5).is_zero());
  CHECK(modular_weight_check(flat4, 5).member);
}

TEST_CASE("first_difference") {
  CHECK_FALSE(first_difference(series(0, {1, 2, 3}, 3), series(0, {1, 2, 3, 4}, 4)));
  CHECK(first_difference(series(0, {1, 2, 3}, 3), series(0, {1, 5, 3}, 3)) == 1);
}

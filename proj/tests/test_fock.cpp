#include <algorithm>
#include <random>

#include "doctest.h"
#include "genuslab/error.hpp"
#include "genuslab/fock.hpp"
#include "genuslab/localize.hpp"
#include "support.hpp"

using namespace genuslab;
using test::series;

namespace {

// Number of (A, S, occ) choices per slot with sum_r r (A + S + occ) <= cutoff,
// by dynamic programming over slots; independent of the library's enumeration.
std::size_t brute_dim(const ModeSpec& spec) {
  std::vector<std::size_t> ways(static_cast<std::size_t>(spec.level_cutoff + 1), 0);
  ways[0] = 1;
  for (const Mode& m : spec.modes) {
    for (int slot = 0; slot < m.multiplicity; ++slot) {
      std::vector<std::size_t> next(ways.size(), 0);
      for (std::size_t lvl = 0; lvl < ways.size(); ++lvl) {
        if (ways[lvl] == 0) continue;
        for (int a = 0; lvl + static_cast<std::size_t>(m.weight * a) < ways.size(); ++a)
          for (int s = 0; lvl + static_cast<std::size_t>(m.weight * (a + s)) < ways.size(); ++s)
            for (int o = 0; o <= 1; ++o) {
              std::size_t l2 = lvl + static_cast<std::size_t>(m.weight * (a + s + o));
              if (l2 < ways.size()) next[l2] += ways[lvl];
            }
      }
      ways = next;
    }
  }
  std::size_t total = 0;
  for (auto w : ways) total += w;
  return total << spec.clifford_rank;
}

Index vacuum(const FockSpace& f) {
  for (Index i = 0; i < f.dim(); ++i) {
    if (f.level(i) == 0 && f.state(i).spinor == 0) return i;
  }
  FAIL("no vacuum");
  return 0;
}

}  // namespace

TEST_CASE("basis dimensions") {
  for (int c = 0; c <= 3; ++c) CHECK(FockSpace(ModeSpec{{{1, 1}}, 0, c}).dim() == static_cast<std::size_t>((c + 1) * (c + 1)));
  const std::vector<ModeSpec> specs = {
      {{{1, 2}}, 0, 4}, {{{2, 1}, {3, 1}}, 1, 6}, {{{1, 1}, {2, 1}, {3, 1}}, 0, 5}, {{{1, 3}}, 2, 3}};
  for (const auto& s : specs) CHECK(FockSpace(s).dim() == brute_dim(s));
}

TEST_CASE("capacity and lookup") {
  CHECK_THROWS_AS(FockSpace(ModeSpec{{{1, 3}}, 0, 6}, 100), Error);
  FockSpace f(ModeSpec{{{1, 1}, {3, 1}}, 0, 3});
  CHECK(f.slot_count() == 2);
  CHECK(f.slot_weight(f.slot_of(3, 0)) == 3);
  try {
    (void)f.slot_of(2, 0);
    FAIL("expected UnknownMode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownMode);
  }
  for (Index i = 0; i < f.dim(); ++i) CHECK(f.find(f.state(i)) == i);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(validate(ModeSpec{{{1, 1}, {1, 1}}, 0, 2}), Error);
  CHECK_THROWS_AS(validate(ModeSpec{{{0, 1}}, 0, 2}), Error);
  CHECK_THROWS_AS(validate(ModeSpec{{{1, 1}}, 0, -1}), Error);
  CHECK(is_ramond_profile(ramond_spec(1, 3)));
  CHECK_FALSE(is_ramond_profile(ModeSpec{{{1, 2}}, 1, 3}));
  CHECK(ramond_spec(2, 3).modes.size() == 3);
  CHECK(ramond_spec(2, 3).modes[2].multiplicity == 4);
  CHECK(first_chern_number(ModeSpec{{{1, 2}, {3, 1}}, 0, 1}) == 5);
}

TEST_CASE("local oscillator forms on the vacuum") {
  FockSpace f(ModeSpec{{{2, 1}}, 0, 4});
  const Index v = vacuum(f);
  SparseVector one = {{v, 1}};
  const GaussianRational i = GaussianRational::i();

  // a_{-r} 1 = -i r zbar, b_{-r} 1 = -i r z; the annihilators kill the vacuum.
  SparseVector am = oscillator(f, OscKind::a, -2, 0).matrix.apply(one);
  REQUIRE(am.size() == 1);
  CHECK(f.state(am[0].first).zbar[0] == 1);
  CHECK(am[0].second == i * GaussianRational(-2));
  SparseVector bm = oscillator(f, OscKind::b, -2, 0).matrix.apply(one);
  REQUIRE(bm.size() == 1);
  CHECK(f.state(bm[0].first).z[0] == 1);
  CHECK(bm[0].second == i * GaussianRational(-2));
  CHECK(oscillator(f, OscKind::a, 2, 0).matrix.apply(one).empty());
  CHECK(oscillator(f, OscKind::b, 2, 0).matrix.apply(one).empty());
  CHECK(oscillator(f, OscKind::psi, 2, 0).matrix.apply(one).empty());
  SparseVector pm = oscillator(f, OscKind::psi, -2, 0).matrix.apply(one);
  REQUIRE(pm.size() == 1);
  CHECK(f.state(pm[0].first).psi[0] == 1);
}

TEST_CASE("operator parity") {
  ModeSpec s{{{1, 1}}, 1, 2};
  CHECK(oscillator_expr(s, {OscKind::a, 1, 0}).parity() == 0);
  CHECK(oscillator_expr(s, {OscKind::psi, 1, 0}).parity() == 1);
  CHECK(clifford_expr(s, 0).parity() == 1);
  CHECK((clifford_expr(s, 0) * oscillator_expr(s, {OscKind::psi, -1, 0})).parity() == 0);
  CHECK(global_expr(s, GlobalKind::Q_flat).parity() == 1);
  CHECK(global_expr(s, GlobalKind::L_K).parity() == 0);
  CHECK_THROWS_AS(clifford_expr(s, 0) + OperatorExpr::identity(), Error);
}

TEST_CASE("normal ordering carries the Koszul sign") {
  ModeSpec s{{{1, 1}}, 0, 3};
  FockSpace f(s);
  const Oscillator psi_plus{OscKind::psi, 1, 0}, psi_minus{OscKind::psi, -1, 0};
  FockOperator ordered = materialize(f, normal_order(s, {psi_plus, psi_minus}));
  FockOperator swapped = materialize(f, product_expr(s, {psi_minus, psi_plus}));
  CHECK(ordered.matrix == swapped.matrix.scaled(-1));
}

TEST_CASE("Clifford generators") {
  for (int l = 1; l <= 3; ++l) {
    FockSpace f(ModeSpec{{{1, 1}}, l, 1});
    const SparseMatrix id = SparseMatrix::identity(f.dim());
    std::vector<FockOperator> e;
    for (int k = 0; k < 2 * l; ++k) e.push_back(clifford_generator(f, k));
    for (int a = 0; a < 2 * l; ++a) {
      CHECK((e[a] * e[a]).matrix == id.scaled(-1));
      CHECK(f.gram() * e[a].matrix == (e[a].matrix.adjoint() * f.gram()).scaled(-1));
      for (int b = a + 1; b < 2 * l; ++b) CHECK(graded_commutator(e[a], e[b]).matrix.is_zero());
    }
  }
}

TEST_CASE("Gram matrix") {
  FockSpace f(ModeSpec{{{1, 1}, {2, 1}}, 1, 4});
  const SparseMatrix& g = f.gram();
  CHECK(g == g.adjoint());
  CHECK(is_positive_definite(g));
  const Index v = vacuum(f);
  CHECK(g.at(v, v) == 1);
  SparseVector one = {{v, 1}};
  CHECK(f.hermitian_form(one, one) == 1);

  // Degree-one monomials in the weight-2 direction: (z, z) = 1/r and (z, zbar) = 0.
  const std::size_t slot = f.slot_of(2, 0);
  FockState z = f.state(v), zbar = f.state(v);
  z.z[slot] = 1;
  zbar.zbar[slot] = 1;
  SparseVector zv = {{*f.find(z), 1}}, zbv = {{*f.find(zbar), 1}};
  CHECK(f.hermitian_form(zv, zv) == test::frac(1, 2));
  CHECK(f.hermitian_form(zbv, zbv) == test::frac(1, 2));
  CHECK(f.hermitian_form(zv, zbv) == 0);
  // (i u, i u) = |i|^2 (u, u).
  SparseVector iz = {{*f.find(z), GaussianRational::i()}};
  CHECK(f.hermitian_form(iz, iz) == test::frac(1, 2));
}

TEST_CASE("Weitzenbock and the kernel on small fixtures") {
  for (const ModeSpec& s : {ModeSpec{{{1, 1}}, 0, 3}, ModeSpec{{{1, 2}, {2, 1}}, 1, 3}}) {
    FockSpace f(s);
    FockOperator q = assemble_global(f, GlobalKind::Q_flat);
    FockOperator la = assemble_global(f, GlobalKind::L_alpha);
    FockOperator lp = assemble_global(f, GlobalKind::L_psi);
    FockOperator lk = assemble_global(f, GlobalKind::L_K);
    CHECK((q * q).matrix == (la + lp).matrix);
    CHECK(graded_commutator(q, lk).matrix.is_zero());
    std::size_t v_prime = 0;
    for (Index i = 0; i < f.dim(); ++i) v_prime += f.in_v_prime(i);
    CHECK(kernel_of(f, q).size() == v_prime);
  }
}

TEST_CASE("characters of single factors") {
  FockSpace f(ModeSpec{{{1, 1}}, 0, 3});
  FockOperator lk = assemble_global(f, GlobalKind::L_K);
  Character sym = graded_character(f, lk, Restriction::S_N_only);
  CHECK(sym.series(test::frac(1, 2), 4) == series(test::frac(1, 2), {1, 1, 1, 1}, 4));
  Character wedge = graded_character(f, lk, Restriction::wedge_only);
  CHECK(wedge.series(test::frac(-1, 2), 2) == series(test::frac(-1, 2), {-1, 1}, 2));
  Character bar = graded_character(f, lk, Restriction::S_Nbar_only);
  CHECK(bar.series(test::frac(-5, 2), 4) == series(test::frac(-5, 2), {1, 1, 1, 1}, 4));
}

TEST_CASE("kernel character equals the point localization term") {
  for (auto [r, d, cutoff] : {std::tuple{2, 1, 6}, std::tuple{1, 2, 4}, std::tuple{2, 2, 4}}) {
    FockSpace f(ModeSpec{{{r, d}}, 0, cutoff});
    Character ch = graded_character(f, assemble_global(f, GlobalKind::L_K), Restriction::kernel_of_Q);
    const Rational offset = test::frac(r * d, 2);
    CHECK(ch.series(offset, cutoff + 1) == component_index(point_component({{r, d}}), cutoff + 1));
  }
}

TEST_CASE("structure constants") {
  // Antisymmetry in the directions of one mode needs multiplicity >= 2 to be nontrivial.
  ModeSpec s{{{1, 2}, {2, 3}}, 1, 2};
  StructureConstants w = random_structure_constants(s, 5);
  CHECK(w == random_structure_constants(s, 5));
  CHECK_FALSE(w == random_structure_constants(s, 6));
  for (const auto& per_dir : w)
    for (const auto& per_mode : per_dir)
      for (std::size_t j = 0; j < per_mode.size(); ++j)
        for (std::size_t k = 0; k < per_mode.size(); ++k) CHECK(per_mode[j][k] == -per_mode[k][j]);
  CHECK(connection_exprs(s, zero_structure_constants(s)).size() == 2);
}

TEST_CASE("linear algebra") {
  // [[1, 2], [2, 4]] has a one-dimensional kernel spanned by (2, -1).
  SparseMatrix m = SparseMatrix::from_columns(2, 2, [](Index j, std::vector<Entry>& col) {
    col.emplace_back(0, j == 0 ? 1 : 2);
    col.emplace_back(1, j == 0 ? 2 : 4);
  });
  auto ker = null_space(m);
  REQUIRE(ker.size() == 1);
  CHECK(m.apply(ker[0]).empty());
  CHECK(rank_of(2, {{{0, 1}, {1, 2}}, {{0, 2}, {1, 4}}}) == 1);
  CHECK_FALSE(is_positive_definite(m));
  CHECK(is_positive_definite(SparseMatrix::identity(3)));
  std::vector<Entry> raw = {{3, 1}, {1, 2}, {3, -1}};
  CHECK(collect(raw) == SparseVector{{1, 2}});
}

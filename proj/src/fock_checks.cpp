#include "genuslab/fock_checks.hpp"

#include <algorithm>
#include <memory>
#include <optional>

#include "genuslab/error.hpp"
#include "genuslab/localize.hpp"
#include "genuslab/series.hpp"

namespace genuslab {

namespace {

int max_weight(const ModeSpec& spec) {
  int r = 0;
  for (const auto& m : spec.modes) r = std::max(r, m.weight);
  return r;
}

/// The truncated space plus, on demand, a copy padded by the largest weight.
class Fixture {
 public:
  explicit Fixture(ModeSpec spec) : spec_(std::move(spec)) { validate(spec_); }

  const ModeSpec& spec() const { return spec_; }

  const FockSpace& space() {
    if (!space_) space_ = std::make_unique<FockSpace>(spec_);
    return *space_;
  }

  const FockSpace& padded() {
    if (!padded_) {
      ModeSpec p = spec_;
      p.level_cutoff += max_weight(spec_);
      padded_ = std::make_unique<FockSpace>(p);
      mask_ = padded_->level_mask(spec_.level_cutoff);
    }
    return *padded_;
  }

  const std::vector<bool>& mask() {
    padded();
    return mask_;
  }

 private:
  ModeSpec spec_;
  std::unique_ptr<FockSpace> space_;
  std::unique_ptr<FockSpace> padded_;
  std::vector<bool> mask_;
};

struct Generator {
  std::string name;
  OscKind kind = OscKind::a;
  int signed_weight = 0;
  int direction = 0;
  int clifford = -1;  // >= 0 for psi_0(e_i)
};

std::vector<Generator> generators(const ModeSpec& spec) {
  std::vector<Generator> out;
  for (const auto& mode : spec.modes) {
    for (int d = 0; d < mode.multiplicity; ++d) {
      for (OscKind kind : {OscKind::a, OscKind::b, OscKind::psi}) {
        for (int sign : {1, -1}) {
          Oscillator o{kind, sign * mode.weight, d};
          out.push_back({oscillator_name(o), kind, o.signed_weight, d, -1});
        }
      }
    }
  }
  for (int i = 0; i < 2 * spec.clifford_rank; ++i) out.push_back({"psi_0(e" + std::to_string(i) + ")", OscKind::psi, 0, 0, i});
  return out;
}

OperatorExpr expr_of(const ModeSpec& spec, const Generator& g) {
  if (g.clifford >= 0) return clifford_expr(spec, g.clifford);
  return oscillator_expr(spec, {g.kind, g.signed_weight, g.direction});
}

/// Scalar c with [x, y] = c * Id.
Rational expected_bracket(const Generator& x, const Generator& y) {
  if (x.clifford >= 0 || y.clifford >= 0) return (x.clifford >= 0 && x.clifford == y.clifford) ? Rational(-2) : Rational(0);
  if (x.kind != y.kind || x.direction != y.direction || x.signed_weight != -y.signed_weight) return 0;
  if (x.kind == OscKind::psi) return 1;
  return x.signed_weight;
}

/// Column j of a * b, from stored columns.
SparseVector product_column(const SparseMatrix& a, const SparseMatrix& b, Index j, std::vector<Entry>& raw) {
  raw.clear();
  for (const auto& [k, bkj] : b.column(j)) {
    for (const auto& [i, aik] : a.column(k)) raw.emplace_back(i, aik * bkj);
  }
  return collect(raw);
}

/// Column j of the graded commutator [a, b].
SparseVector bracket_column(const FockOperator& a, const FockOperator& b, Index j, std::vector<Entry>& raw) {
  raw.clear();
  const bool anti = (a.parity * b.parity) % 2 == 1;
  for (const auto& [k, bkj] : b.matrix.column(j)) {
    for (const auto& [i, aik] : a.matrix.column(k)) raw.emplace_back(i, aik * bkj);
  }
  for (const auto& [k, akj] : a.matrix.column(j)) {
    for (const auto& [i, bik] : b.matrix.column(k)) {
      raw.emplace_back(i, bik * akj);
      if (!anti) raw.back().second.negate();
    }
  }
  return collect(raw);
}

/// Masked rows of `got` equal masked rows of `want`.
bool same_on(const SparseVector& got, const SparseVector& want, const std::vector<bool>& mask) {
  std::size_t p = 0;
  std::size_t q = 0;
  while (true) {
    while (p < got.size() && !mask[got[p].first]) ++p;
    while (q < want.size() && !mask[want[q].first]) ++q;
    if (p == got.size() || q == want.size()) return p == got.size() && q == want.size();
    if (got[p].first != want[q].first || !(got[p].second == want[q].second)) return false;
    ++p;
    ++q;
  }
}

/// [a, b] = c * Id on the masked block.
bool bracket_is_scalar(const FockOperator& a, const FockOperator& b, const Rational& c, const std::vector<bool>& mask) {
  std::vector<Entry> raw;
  const GaussianRational value(c);
  for (Index j = 0; j < mask.size(); ++j) {
    if (!mask[j]) continue;
    SparseVector want;
    if (sgn(c) != 0) want.emplace_back(j, value);
    if (!same_on(bracket_column(a, b, j, raw), want, mask)) return false;
  }
  return true;
}

/// [a, b] = m on the masked block.
bool bracket_equals(const FockOperator& a, const FockOperator& b, const SparseMatrix& m, const std::vector<bool>& mask) {
  std::vector<Entry> raw;
  for (Index j = 0; j < mask.size(); ++j) {
    if (mask[j] && !same_on(bracket_column(a, b, j, raw), m.column(j), mask)) return false;
  }
  return true;
}

/// x * y = sign * u * v on the masked block.
bool products_agree(const SparseMatrix& x, const SparseMatrix& y, const SparseMatrix& u, const SparseMatrix& v, int sign,
                    const std::vector<bool>& mask) {
  std::vector<Entry> raw;
  for (Index j = 0; j < mask.size(); ++j) {
    if (!mask[j]) continue;
    SparseVector lhs = product_column(x, y, j, raw);
    SparseVector rhs = product_column(u, v, j, raw);
    if (sign < 0) {
      for (auto& e : rhs) e.second.negate();
    }
    if (!same_on(lhs, rhs, mask)) return false;
  }
  return true;
}

FockOperator identity_times(const FockSpace& space, const Rational& c) {
  return {SparseMatrix::identity(space.dim()).scaled(GaussianRational(c)), 0};
}

CheckResult pass(std::string name, std::string detail) {
  return {std::move(name), CheckStatus::pass, std::move(detail)};
}

CheckResult fail(std::string name, std::string detail) {
  return {std::move(name), CheckStatus::fail, std::move(detail)};
}

CheckResult skip(std::string name, std::string detail) {
  return {std::move(name), CheckStatus::skipped, std::move(detail)};
}

template <class F>
CheckResult guarded(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return fail(name, e.what());
  }
}

CheckResult brackets(Fixture& fx) {
  const std::string name = "brackets";
  return guarded(name, [&] {
    const FockSpace& space = fx.padded();
    const auto& mask = fx.mask();
    auto gens = generators(fx.spec());
    std::vector<FockOperator> ops;
    for (const auto& g : gens) ops.push_back(materialize(space, expr_of(fx.spec(), g)));
    std::size_t count = 0;
    for (std::size_t p = 0; p < gens.size(); ++p) {
      for (std::size_t q = p; q < gens.size(); ++q) {
        Rational c = expected_bracket(gens[p], gens[q]);
        if (!bracket_is_scalar(ops[p], ops[q], c, mask)) {
          return fail(name, "[" + gens[p].name + ", " + gens[q].name + "] != " + to_string(c));
        }
        ++count;
      }
    }
    return pass(name, std::to_string(count) + " brackets");
  });
}

CheckResult adjoints(Fixture& fx) {
  const std::string name = "adjoints";
  return guarded(name, [&] {
    const FockSpace& space = fx.padded();
    const auto& mask = fx.mask();
    const SparseMatrix& g = space.gram();
    std::size_t count = 0;
    for (const auto& mode : fx.spec().modes) {
      for (int d = 0; d < mode.multiplicity; ++d) {
        for (OscKind kind : {OscKind::a, OscKind::b, OscKind::psi}) {
          FockOperator up = oscillator(space, kind, mode.weight, d);
          FockOperator down = oscillator(space, kind, -mode.weight, d);
          if (!products_agree(g, up.matrix, down.matrix.adjoint(), g, 1, mask)) {
            return fail(name, oscillator_name({kind, -mode.weight, d}) + " is not the adjoint of " +
                                  oscillator_name({kind, mode.weight, d}));
          }
          ++count;
        }
      }
    }
    for (int i = 0; i < 2 * fx.spec().clifford_rank; ++i) {
      FockOperator e = clifford_generator(space, i);
      if (!products_agree(g, e.matrix, e.matrix.adjoint(), g, -1, mask)) {
        return fail(name, "psi_0(e" + std::to_string(i) + ") is not anti-self-adjoint");
      }
      ++count;
    }
    return pass(name, std::to_string(count) + " adjoint relations");
  });
}

CheckResult clifford(Fixture& fx) {
  const std::string name = "clifford";
  const int n = 2 * fx.spec().clifford_rank;
  if (n == 0) return skip(name, "Clifford rank 0");
  return guarded(name, [&] {
    const FockSpace& space = fx.space();
    std::vector<FockOperator> e;
    for (int i = 0; i < n; ++i) e.push_back(clifford_generator(space, i));
    for (int i = 0; i < n; ++i) {
      if (e[i].parity != 1) return fail(name, "psi_0(e" + std::to_string(i) + ") is not odd");
      for (int j = i; j < n; ++j) {
        FockOperator anti = graded_commutator(e[i], e[j]);
        if (!(anti.matrix == identity_times(space, i == j ? -2 : 0).matrix)) {
          return fail(name, "e" + std::to_string(i) + " e" + std::to_string(j) + " + e" + std::to_string(j) + " e" +
                                std::to_string(i) + " != " + (i == j ? "-2" : "0"));
        }
      }
    }
    return pass(name, std::to_string(n) + " generators");
  });
}

CheckResult gram(Fixture& fx) {
  const std::string name = "gram_positive_definite";
  return guarded(name, [&] {
    const FockSpace& space = fx.space();
    if (!(space.gram() == space.gram().adjoint())) return fail(name, "Gram matrix is not Hermitian");
    if (!is_positive_definite(space.gram())) return fail(name, "a leading minor is not positive");
    return pass(name, "dim " + std::to_string(space.dim()));
  });
}

CheckResult weitzenbock(Fixture& fx) {
  const std::string name = "weitzenbock";
  return guarded(name, [&] {
    const FockSpace& space = fx.space();
    FockOperator q = assemble_global(space, GlobalKind::Q_flat);
    FockOperator rhs = assemble_global(space, GlobalKind::L_alpha) + assemble_global(space, GlobalKind::L_psi);
    if (!((q * q).matrix == rhs.matrix)) return fail(name, "Q^2 != L_alpha + L_psi");
    if (!graded_commutator(q, assemble_global(space, GlobalKind::L_K)).matrix.is_zero()) {
      return fail(name, "[Q, L_K] != 0");
    }
    return pass(name, "Q^2 = L_alpha + L_psi, [Q, L_K] = 0");
  });
}

CheckResult kprime(Fixture& fx) {
  const std::string name = "kprime";
  return guarded(name, [&] {
    const FockSpace& space = fx.space();
    FockOperator dk = assemble_global(space, GlobalKind::dKprime);
    Rational c1 = first_chern_number(fx.spec());
    SparseMatrix expected =
        identity_times(space, c1).matrix - assemble_global(space, GlobalKind::L_psi).matrix.scaled(2);
    if (!(dk.matrix == expected)) return fail(name, "dK' != c1 - 2 L_psi");
    SparseMatrix lk = assemble_global(space, GlobalKind::K).matrix + dk.matrix.scaled(Rational(1, 2));
    if (!(assemble_global(space, GlobalKind::L_K).matrix == lk)) return fail(name, "L_K != K + dK'/2");
    if (assemble_global(space, GlobalKind::Kprime).parity != 1) return fail(name, "K' is not odd");
    return pass(name, "dK' = c1 - 2 L_psi, L_K = K + dK'/2");
  });
}

CheckResult kernel(Fixture& fx) {
  const std::string name = "kernel_equals_v_prime";
  return guarded(name, [&] {
    const FockSpace& space = fx.space();
    FockOperator q = assemble_global(space, GlobalKind::Q_flat);
    std::size_t v_prime = 0;
    for (Index i = 0; i < space.dim(); ++i) {
      if (!space.in_v_prime(i)) continue;
      ++v_prime;
      if (!q.matrix.column(i).empty()) return fail(name, "Q does not kill " + space.describe(i));
    }
    std::size_t k = kernel_of(space, q).size();
    if (k != v_prime) {
      return fail(name, "dim ker Q = " + std::to_string(k) + " but dim V' = " + std::to_string(v_prime));
    }
    return pass(name, "dim ker Q = dim V' = " + std::to_string(k));
  });
}

CheckResult connection(Fixture& fx, int draws, std::uint32_t first_seed) {
  const std::string name = "connection";
  const ModeSpec& spec = fx.spec();
  if (spec.clifford_rank == 0) return skip(name, "no base directions at Clifford rank 0");
  return guarded(name, [&] {
    const FockSpace& space = fx.padded();
    const auto& mask = fx.mask();
    FockOperator q = assemble_global(space, GlobalKind::Q_flat);
    std::vector<FockOperator> ls = {assemble_global(space, GlobalKind::L_alpha),
                                    assemble_global(space, GlobalKind::L_beta),
                                    assemble_global(space, GlobalKind::L_psi)};
    const char* l_names[] = {"L_alpha", "L_beta", "L_psi"};
    // Oscillator matrices, indexed like the loops below.
    std::vector<FockOperator> osc;
    for (const auto& mode : spec.modes) {
      for (OscKind kind : {OscKind::a, OscKind::b, OscKind::psi}) {
        for (int sign : {1, -1}) {
          for (int j = 0; j < mode.multiplicity; ++j) osc.push_back(oscillator(space, kind, sign * mode.weight, j));
        }
      }
    }
    std::size_t count = 0;
    for (int draw = 0; draw < draws; ++draw) {
      const std::uint32_t seed = first_seed + static_cast<std::uint32_t>(draw);
      StructureConstants w = random_structure_constants(spec, seed);
      std::vector<FockOperator> d = connection_action(space, w);
      const std::string tag = " (seed " + std::to_string(seed) + ")";
      for (std::size_t i = 0; i < d.size(); ++i) {
        std::size_t base = 0;
        for (std::size_t m = 0; m < spec.modes.size(); ++m) {
          const int r = spec.modes[m].weight;
          const auto mult = static_cast<std::size_t>(spec.modes[m].multiplicity);
          for (OscKind kind : {OscKind::a, OscKind::b, OscKind::psi}) {
            for (int sign : {1, -1}) {
              for (std::size_t j = 0; j < mult; ++j) {
                // [D_i, X^j] = sum_k w_{ij}^k X^k for every oscillator family.
                SparseMatrix rhs(space.dim(), space.dim());
                for (std::size_t k = 0; k < mult; ++k) {
                  const Rational& c = w[i][m][j][k];
                  if (sgn(c) != 0) rhs += osc[base + k].matrix.scaled(GaussianRational(c));
                }
                if (!bracket_equals(d[i], osc[base + j], rhs, mask)) {
                  return fail(name, "[D_" + std::to_string(i) + ", " +
                                        oscillator_name({kind, sign * r, static_cast<int>(j)}) + "] mismatch" + tag);
                }
                ++count;
              }
              base += mult;
            }
          }
        }
        for (std::size_t t = 0; t < ls.size(); ++t) {
          if (!bracket_is_scalar(d[i], ls[t], 0, mask)) {
            return fail(name, "[D_" + std::to_string(i) + ", " + l_names[t] + "] != 0" + tag);
          }
          ++count;
        }
      }
      FockOperator dm = materialize(space, connection_dirac_expr(spec, w));
      if (!bracket_is_scalar(dm, q, 0, mask)) {
        return fail(name, "[D_M, Q] != 0" + tag);
      }
      ++count;
    }
    return pass(name, std::to_string(count) + " relations over " + std::to_string(draws) + " draws");
  });
}

CheckResult ramond(Fixture& fx) {
  const std::string name = "ramond";
  const ModeSpec& spec = fx.spec();
  if (spec.clifford_rank == 0 || !is_ramond_profile(spec)) {
    return skip(name, "modes are not 1..cutoff with multiplicity 2l");
  }
  return guarded(name, [&] {
    const FockSpace& space = fx.space();
    FockOperator q = assemble_global(space, GlobalKind::Q_R_flat);
    FockOperator p = assemble_global(space, GlobalKind::P);
    FockOperator rhs = assemble_global(space, GlobalKind::L_alpha) + assemble_global(space, GlobalKind::L_psi);
    if (!((q * q).matrix == rhs.matrix)) return fail(name, "Q_R^2 != L_alpha + L_psi");
    if (!graded_commutator(q, p).matrix.is_zero()) return fail(name, "[Q_R, P] != 0");
    const int l = spec.clifford_rank;
    const int order = spec.level_cutoff + 1;
    Rational offset(-l, 12);
    offset.canonicalize();
    PuiseuxSeries got = graded_character(space, p, Restriction::kernel_of_Q, false).series(offset, order);
    PuiseuxSeries want = eta_power(-2 * l, order).scaled(Rational(1L << l));
    if (!agree_below(got, want, offset + order)) {
      return fail(name, "Tr q^P on ker Q_R = " + to_text(got) + ", expected " + to_text(want));
    }
    return pass(name, to_text(got));
  });
}

CheckResult character(Fixture& fx) {
  const std::string name = "character";
  const ModeSpec& spec = fx.spec();
  if (spec.clifford_rank != 0) return skip(name, "supertrace over Delta vanishes identically for l > 0");
  const long c1 = first_chern_number(spec);
  if (c1 % 2 != 0) return skip(name, "odd c1: the localization term would be branched");
  return guarded(name, [&] {
    const FockSpace& space = fx.space();
    const int order = spec.level_cutoff + 1;
    Rational offset(c1, 2);
    offset.canonicalize();
    PuiseuxSeries got = graded_character(space, assemble_global(space, GlobalKind::L_K), Restriction::kernel_of_Q)
                            .series(offset, order);
    std::vector<std::pair<int, int>> summands;
    for (const auto& m : spec.modes) summands.emplace_back(m.weight, m.multiplicity);
    PuiseuxSeries want = component_index(point_component(summands), order);
    if (!agree_below(got, want, offset + order)) {
      return fail(name, "kernel character " + to_text(got) + " != localization " + to_text(want));
    }
    return pass(name, to_text(got));
  });
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

CheckResult check_brackets(const ModeSpec& spec) {
  Fixture fx(spec);
  return brackets(fx);
}

CheckResult check_adjoints(const ModeSpec& spec) {
  Fixture fx(spec);
  return adjoints(fx);
}

CheckResult check_clifford(const ModeSpec& spec) {
  Fixture fx(spec);
  return clifford(fx);
}

CheckResult check_gram(const ModeSpec& spec) {
  Fixture fx(spec);
  return gram(fx);
}

CheckResult check_weitzenbock(const ModeSpec& spec) {
  Fixture fx(spec);
  return weitzenbock(fx);
}

CheckResult check_kprime(const ModeSpec& spec) {
  Fixture fx(spec);
  return kprime(fx);
}

CheckResult check_kernel(const ModeSpec& spec) {
  Fixture fx(spec);
  return kernel(fx);
}

CheckResult check_connection(const ModeSpec& spec, int draws, std::uint32_t first_seed) {
  Fixture fx(spec);
  return connection(fx, draws, first_seed);
}

CheckResult check_ramond(const ModeSpec& spec) {
  Fixture fx(spec);
  return ramond(fx);
}

CheckResult check_character(const ModeSpec& spec) {
  Fixture fx(spec);
  return character(fx);
}

std::vector<CheckResult> run_fock_suite(const ModeSpec& spec) {
  Fixture fx(spec);
  return {brackets(fx), adjoints(fx),   clifford(fx),          gram(fx),   weitzenbock(fx),
          kprime(fx),   kernel(fx),     connection(fx, 10, 1), ramond(fx), character(fx)};
}

std::vector<std::vector<Mode>> mode_sweep(int max_total, int max_weight) {
  std::vector<std::vector<Mode>> out;
  std::vector<int> mult(static_cast<std::size_t>(max_weight), 0);
  // Odometer over multiplicities, keeping totals in 1..max_total.
  while (true) {
    int total = 0;
    for (int m : mult) total += m;
    if (total >= 1 && total <= max_total) {
      std::vector<Mode> modes;
      for (int r = 1; r <= max_weight; ++r) {
        if (mult[static_cast<std::size_t>(r - 1)] > 0) modes.push_back({r, mult[static_cast<std::size_t>(r - 1)]});
      }
      out.push_back(std::move(modes));
    }
    std::size_t pos = 0;
    while (pos < mult.size() && ++mult[pos] > max_total) mult[pos++] = 0;
    if (pos == mult.size()) break;
  }
  return out;
}

}  // namespace genuslab

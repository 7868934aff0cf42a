#include "genuslab/fock.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "genuslab/error.hpp"
#include "genuslab/parallel.hpp"

namespace genuslab {

namespace {

GaussianRational imag_unit() { return GaussianRational::i(); }

/// Applies one primitive to a basis monomial in place. Returns false when the result is zero.
bool apply(const Factor& f, FockState& s, GaussianRational& c, int clifford_rank) {
  const std::uint32_t k = f.index;
  auto koszul = [&](std::uint32_t slot) {
    // psi passes the spinor factor and every occupied slot to its left.
    int n = std::popcount(s.spinor);
    for (std::uint32_t t = 0; t < slot; ++t) n += s.psi[t];
    return n % 2 == 0 ? 1 : -1;
  };
  switch (f.op) {
    case Elementary::mul_z:
      ++s.z[k];
      return true;
    case Elementary::mul_zbar:
      ++s.zbar[k];
      return true;
    case Elementary::d_z:
      if (s.z[k] == 0) return false;
      c *= GaussianRational(static_cast<long>(s.z[k]));
      --s.z[k];
      return true;
    case Elementary::d_zbar:
      if (s.zbar[k] == 0) return false;
      c *= GaussianRational(static_cast<long>(s.zbar[k]));
      --s.zbar[k];
      return true;
    case Elementary::psi_create:
      if (s.psi[k] != 0) return false;
      if (koszul(k) < 0) c = -c;
      s.psi[k] = 1;
      return true;
    case Elementary::psi_annihilate:
      if (s.psi[k] == 0) return false;
      if (koszul(k) < 0) c = -c;
      s.psi[k] = 0;
      return true;
    case Elementary::clifford: {
      // Jordan-Wigner: e_{2j} -> i Z..Z X_j, e_{2j+1} -> i Z..Z Y_j.
      const std::uint32_t j = k / 2;
      if (static_cast<int>(j) >= clifford_rank) return false;
      const std::uint32_t below = s.spinor & ((1u << j) - 1u);
      const bool bit = ((s.spinor >> j) & 1u) != 0;
      int sign = std::popcount(below) % 2 == 0 ? 1 : -1;
      s.spinor ^= (1u << j);
      if (k % 2 == 0) {
        c *= imag_unit();
        if (sign < 0) c = -c;
      } else {
        // i * Y: |0> -> i*i|1> = -|1>, |1> -> i*(-i)|0> = |0>.
        if (!bit) sign = -sign;
        if (sign < 0) c = -c;
      }
      return true;
    }
  }
  return false;
}

Rational half(long n) {
  Rational h(n, 2);
  h.canonicalize();
  return h;
}

int factor_parity(Elementary op) {
  return (op == Elementary::psi_create || op == Elementary::psi_annihilate || op == Elementary::clifford) ? 1 : 0;
}

std::size_t mode_index(const ModeSpec& spec, int weight) {
  for (std::size_t m = 0; m < spec.modes.size(); ++m) {
    if (spec.modes[m].weight == weight) return m;
  }
  throw Error(ErrorCode::UnknownMode, "no mode of weight " + std::to_string(weight));
}

std::uint32_t slot_index(const ModeSpec& spec, int weight, int direction) {
  std::size_t m = mode_index(spec, weight);
  if (direction < 0 || direction >= spec.modes[m].multiplicity) {
    throw Error(ErrorCode::UnknownMode, "mode of weight " + std::to_string(weight) + " has no direction " +
                                            std::to_string(direction));
  }
  std::uint32_t slot = 0;
  for (std::size_t t = 0; t < m; ++t) slot += static_cast<std::uint32_t>(spec.modes[t].multiplicity);
  return slot + static_cast<std::uint32_t>(direction);
}

std::vector<int> slot_weights(const ModeSpec& spec) {
  std::vector<int> w;
  for (const auto& mode : spec.modes) w.insert(w.end(), static_cast<std::size_t>(mode.multiplicity), mode.weight);
  return w;
}

}  // namespace

ModeSpec ramond_spec(int clifford_rank, int cutoff) {
  ModeSpec spec;
  spec.clifford_rank = clifford_rank;
  spec.level_cutoff = cutoff;
  if (clifford_rank > 0) {
    for (int n = 1; n <= cutoff; ++n) spec.modes.push_back({n, 2 * clifford_rank});
  }
  validate(spec);
  return spec;
}

bool is_ramond_profile(const ModeSpec& spec) {
  if (spec.clifford_rank == 0) return spec.modes.empty();
  if (static_cast<int>(spec.modes.size()) != spec.level_cutoff) return false;
  for (std::size_t n = 0; n < spec.modes.size(); ++n) {
    if (spec.modes[n].weight != static_cast<int>(n + 1) || spec.modes[n].multiplicity != 2 * spec.clifford_rank) {
      return false;
    }
  }
  return true;
}

void validate(const ModeSpec& spec) {
  if (spec.level_cutoff < 0) throw Error(ErrorCode::InvalidArgument, "level cutoff must be nonnegative");
  if (spec.clifford_rank < 0 || spec.clifford_rank > 16) {
    throw Error(ErrorCode::InvalidArgument, "Clifford rank must lie in 0..16");
  }
  std::set<int> seen;
  for (const auto& mode : spec.modes) {
    if (mode.weight <= 0) throw Error(ErrorCode::NonPositiveWeight, "mode weight " + std::to_string(mode.weight));
    if (mode.multiplicity <= 0) {
      throw Error(ErrorCode::InvalidArgument, "mode of weight " + std::to_string(mode.weight) +
                                                  " needs positive multiplicity");
    }
    if (!seen.insert(mode.weight).second) {
      throw Error(ErrorCode::InvalidArgument, "weight " + std::to_string(mode.weight) + " listed twice");
    }
  }
}

long first_chern_number(const ModeSpec& spec) {
  long c1 = 0;
  for (const auto& mode : spec.modes) c1 += static_cast<long>(mode.weight) * mode.multiplicity;
  return c1;
}

std::size_t FockStateHash::operator()(const FockState& s) const noexcept {
  std::size_t h = s.spinor;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (auto v : s.z) mix(v);
  for (auto v : s.zbar) mix(v + 0x10000u);
  for (auto v : s.psi) mix(v + 0x20000u);
  return h;
}

FockSpace::FockSpace(ModeSpec spec, std::size_t budget) : spec_(std::move(spec)) {
  validate(spec_);
  slot_weight_ = slot_weights(spec_);
  enumerate(budget);
  build_gram();
}

void FockSpace::enumerate(std::size_t budget) {
  const std::size_t n = slot_weight_.size();
  const std::uint32_t spinors = 1u << spec_.clifford_rank;
  FockState current;
  current.z.assign(n, 0);
  current.zbar.assign(n, 0);
  current.psi.assign(n, 0);
  std::function<void(std::size_t, int)> visit = [&](std::size_t slot, int remaining) {
    if (slot == n) {
      if (states_.size() + spinors > budget) {
        throw Error(ErrorCode::CapacityExceeded, "truncated space exceeds " + std::to_string(budget) + " states");
      }
      int level = spec_.level_cutoff - remaining;
      int occupied = std::accumulate(current.psi.begin(), current.psi.end(), 0);
      for (std::uint32_t sp = 0; sp < spinors; ++sp) {
        current.spinor = sp;
        index_.emplace(current, static_cast<Index>(states_.size()));
        states_.push_back(current);
        levels_.push_back(level);
        parities_.push_back((std::popcount(sp) + occupied) % 2);
      }
      current.spinor = 0;
      return;
    }
    const int r = slot_weight_[slot];
    for (int a = 0; r * a <= remaining; ++a) {
      for (int s = 0; r * (a + s) <= remaining; ++s) {
        for (int o = 0; o <= 1 && r * (a + s + o) <= remaining; ++o) {
          current.z[slot] = static_cast<std::uint16_t>(a);
          current.zbar[slot] = static_cast<std::uint16_t>(s);
          current.psi[slot] = static_cast<std::uint8_t>(o);
          visit(slot + 1, remaining - r * (a + s + o));
        }
      }
    }
    current.z[slot] = 0;
    current.zbar[slot] = 0;
    current.psi[slot] = 0;
  };
  visit(0, spec_.level_cutoff);
}

void FockSpace::build_gram() {
  // The form pairs states with equal spinor, equal psibar occupancy and equal
  // z-degree minus zbar-degree in every slot.
  std::map<std::vector<int>, std::vector<Index>> groups;
  const std::size_t n = slot_weight_.size();
  for (Index i = 0; i < states_.size(); ++i) {
    const FockState& s = states_[i];
    std::vector<int> key;
    key.reserve(2 * n + 1);
    key.push_back(static_cast<int>(s.spinor));
    for (std::size_t t = 0; t < n; ++t) {
      key.push_back(s.psi[t]);
      key.push_back(static_cast<int>(s.z[t]) - static_cast<int>(s.zbar[t]));
    }
    groups[key].push_back(i);
  }
  std::vector<SparseVector> columns(states_.size());
  for (const auto& [key, members] : groups) {
    for (Index j : members) {
      for (Index i : members) {
        Rational value = 1;
        for (std::size_t t = 0; t < n; ++t) {
          unsigned k = static_cast<unsigned>(states_[j].z[t]) + states_[i].zbar[t];
          if (k == 0) continue;
          Integer rk;
          mpz_ui_pow_ui(rk.get_mpz_t(), static_cast<unsigned long>(slot_weight_[t]), k);
          value *= Rational(factorial(k)) / Rational(rk);
        }
        columns[j].emplace_back(i, GaussianRational(value));
      }
    }
  }
  gram_ = SparseMatrix::from_columns(states_.size(), states_.size(),
                                     [&](Index j, std::vector<Entry>& out) { out = std::move(columns[j]); });
}

std::size_t FockSpace::slot_of(int weight, int direction) const { return slot_index(spec_, weight, direction); }

std::optional<Index> FockSpace::find(const FockState& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FockSpace::in_v_prime(Index i) const {
  const FockState& s = states_[i];
  return std::all_of(s.zbar.begin(), s.zbar.end(), [](auto v) { return v == 0; }) &&
         std::all_of(s.psi.begin(), s.psi.end(), [](auto v) { return v == 0; });
}

std::vector<bool> FockSpace::level_mask(int max_level) const {
  std::vector<bool> mask(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) mask[i] = levels_[i] <= max_level;
  return mask;
}

GaussianRational FockSpace::hermitian_form(const SparseVector& u, const SparseVector& v) const {
  SparseVector gu = gram_.apply(u);
  GaussianRational total;
  std::size_t a = 0;
  for (const auto& [i, x] : v) {
    while (a < gu.size() && gu[a].first < i) ++a;
    if (a < gu.size() && gu[a].first == i) total += x.conj() * gu[a].second;
  }
  return total;
}

std::string FockSpace::describe(Index i) const {
  const FockState& s = states_[i];
  std::ostringstream os;
  bool any = false;
  auto put = [&](const char* name, std::size_t slot, int power) {
    if (power == 0) return;
    if (any) os << ' ';
    any = true;
    os << name << slot;
    if (power > 1) os << '^' << power;
  };
  for (std::size_t t = 0; t < s.z.size(); ++t) {
    put("z", t, s.z[t]);
    put("zb", t, s.zbar[t]);
    put("psi", t, s.psi[t]);
  }
  if (!any) os << '1';
  if (spec_.clifford_rank > 0) os << " |" << s.spinor << '>';
  return os.str();
}

OperatorExpr OperatorExpr::identity(const GaussianRational& c) {
  OperatorExpr e;
  if (!c.is_zero()) e.terms_.push_back({c, {}});
  return e;
}

OperatorExpr OperatorExpr::factor(Elementary op, std::uint32_t index, const GaussianRational& c) {
  OperatorExpr e;
  e.parity_ = factor_parity(op);
  if (!c.is_zero()) e.terms_.push_back({c, {Factor{op, index}}});
  return e;
}

OperatorExpr& OperatorExpr::operator+=(const OperatorExpr& other) {
  if (other.terms_.empty()) return *this;
  if (terms_.empty()) {
    parity_ = other.parity_;
  } else if (parity_ != other.parity_) {
    throw Error(ErrorCode::ParityMismatch, "sum of an even and an odd operator");
  }
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

OperatorExpr& OperatorExpr::operator-=(const OperatorExpr& other) { return *this += other.scaled(-1); }

OperatorExpr OperatorExpr::scaled(const GaussianRational& c) const {
  OperatorExpr e;
  if (c.is_zero()) return e;
  e.parity_ = parity_;
  e.terms_ = terms_;
  for (auto& t : e.terms_) t.coeff *= c;
  return e;
}

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  OperatorExpr e;
  if (a.terms_.empty() || b.terms_.empty()) return e;
  e.parity_ = (a.parity_ + b.parity_) % 2;
  e.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      OperatorExpr::Term t{ta.coeff * tb.coeff, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      e.terms_.push_back(std::move(t));
    }
  }
  return e;
}

FockOperator materialize(const FockSpace& space, const OperatorExpr& expr) {
  const std::size_t n = space.dim();
  const int rank = space.spec().clifford_rank;
  std::vector<std::vector<Entry>> columns(n);
  parallel_for(n, [&](std::size_t j) {
    auto& out = columns[j];
    for (const auto& term : expr.terms()) {
      FockState s = space.state(static_cast<Index>(j));
      GaussianRational c = term.coeff;
      bool alive = true;
      for (auto it = term.factors.rbegin(); it != term.factors.rend() && alive; ++it) alive = apply(*it, s, c, rank);
      if (!alive) continue;
      if (auto row = space.find(s)) out.emplace_back(*row, std::move(c));
    }
  });
  FockOperator op;
  op.parity = expr.parity();
  op.matrix = SparseMatrix::from_columns(n, n, [&](Index j, std::vector<Entry>& out) { out = std::move(columns[j]); });
  return op;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  return {a.matrix * b.matrix, (a.parity + b.parity) % 2};
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  if (a.parity != b.parity && !a.matrix.is_zero() && !b.matrix.is_zero()) {
    throw Error(ErrorCode::ParityMismatch, "sum of an even and an odd operator");
  }
  return {a.matrix + b.matrix, a.matrix.is_zero() ? b.parity : a.parity};
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  return a + FockOperator{b.matrix.scaled(-1), b.parity};
}

FockOperator graded_commutator(const FockOperator& a, const FockOperator& b) {
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols() ||
      a.matrix.rows() != a.matrix.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "bracket of operators on different spaces");
  }
  const long sign = (a.parity * b.parity) % 2 == 1 ? -1 : 1;
  return {a.matrix * b.matrix - (b.matrix * a.matrix).scaled(sign), (a.parity + b.parity) % 2};
}

std::string oscillator_name(const Oscillator& o) {
  const char* kind = o.kind == OscKind::a ? "a" : o.kind == OscKind::b ? "b" : "psi";
  return std::string(kind) + "^" + std::to_string(o.direction) + "_" + std::to_string(o.signed_weight);
}

OperatorExpr oscillator_expr(const ModeSpec& spec, const Oscillator& o) {
  if (o.signed_weight == 0) throw Error(ErrorCode::UnknownMode, "oscillator weight must be nonzero");
  const int r = std::abs(o.signed_weight);
  const std::uint32_t slot = slot_index(spec, r, o.direction);
  const GaussianRational i = imag_unit();
  const GaussianRational minus_ir = i * GaussianRational(-r);
  const bool annihilation = o.signed_weight > 0;
  switch (o.kind) {
    case OscKind::a:
      // a_{+r} = i d/dzbar, a_{-r} = i (d/dz - r zbar)
      if (annihilation) return OperatorExpr::factor(Elementary::d_zbar, slot, i);
      return OperatorExpr::factor(Elementary::d_z, slot, i) + OperatorExpr::factor(Elementary::mul_zbar, slot, minus_ir);
    case OscKind::b:
      // b_{+r} = i d/dz, b_{-r} = i (d/dzbar - r z)
      if (annihilation) return OperatorExpr::factor(Elementary::d_z, slot, i);
      return OperatorExpr::factor(Elementary::d_zbar, slot, i) + OperatorExpr::factor(Elementary::mul_z, slot, minus_ir);
    case OscKind::psi:
      return OperatorExpr::factor(annihilation ? Elementary::psi_annihilate : Elementary::psi_create, slot);
  }
  throw Error(ErrorCode::UnknownMode, "unknown oscillator kind");
}

FockOperator oscillator(const FockSpace& space, OscKind kind, int signed_weight, int direction) {
  return materialize(space, oscillator_expr(space.spec(), {kind, signed_weight, direction}));
}

OperatorExpr clifford_expr(const ModeSpec& spec, int i) {
  if (i < 0 || i >= 2 * spec.clifford_rank) {
    throw Error(ErrorCode::IndexOutOfRange, "Clifford generator " + std::to_string(i) + " outside 0.." +
                                                std::to_string(2 * spec.clifford_rank - 1));
  }
  return OperatorExpr::factor(Elementary::clifford, static_cast<std::uint32_t>(i));
}

FockOperator clifford_generator(const FockSpace& space, int i) { return materialize(space, clifford_expr(space.spec(), i)); }

OperatorExpr product_expr(const ModeSpec& spec, const std::vector<Oscillator>& word) {
  OperatorExpr e = OperatorExpr::identity();
  for (const auto& o : word) e = e * oscillator_expr(spec, o);
  return e;
}

OperatorExpr normal_order(const ModeSpec& spec, const std::vector<Oscillator>& word) {
  std::vector<Oscillator> ordered;
  int sign = 1;
  for (std::size_t p = 0; p < word.size(); ++p) {
    if (word[p].signed_weight < 0) ordered.push_back(word[p]);
  }
  for (std::size_t p = 0; p < word.size(); ++p) {
    if (word[p].signed_weight > 0) ordered.push_back(word[p]);
  }
  // Each annihilator jumps over every later creator; odd-odd jumps flip the sign.
  for (std::size_t p = 0; p < word.size(); ++p) {
    if (word[p].signed_weight < 0 || word[p].kind != OscKind::psi) continue;
    for (std::size_t q = p + 1; q < word.size(); ++q) {
      if (word[q].signed_weight < 0 && word[q].kind == OscKind::psi) sign = -sign;
    }
  }
  return product_expr(spec, ordered).scaled(sign);
}

std::string global_name(GlobalKind kind) {
  switch (kind) {
    case GlobalKind::Q_flat: return "Q_flat";
    case GlobalKind::Q_R_flat: return "Q_R_flat";
    case GlobalKind::L_alpha: return "L_alpha";
    case GlobalKind::L_beta: return "L_beta";
    case GlobalKind::L_psi: return "L_psi";
    case GlobalKind::L_K: return "L_K";
    case GlobalKind::K: return "K";
    case GlobalKind::Kprime: return "Kprime";
    case GlobalKind::dKprime: return "dKprime";
    case GlobalKind::P: return "P";
  }
  return "?";
}

OperatorExpr global_expr(const ModeSpec& spec, GlobalKind kind) {
  validate(spec);
  if ((kind == GlobalKind::Q_R_flat || kind == GlobalKind::P) && !is_ramond_profile(spec)) {
    throw Error(ErrorCode::SpecMismatch, global_name(kind) + " needs modes 1..cutoff of multiplicity 2l");
  }
  auto osc = [&](OscKind k, int w, int d) { return oscillator_expr(spec, {k, w, d}); };
  auto sum_over_slots = [&](const std::function<OperatorExpr(int, int)>& f) {
    OperatorExpr total;
    for (const auto& mode : spec.modes) {
      for (int d = 0; d < mode.multiplicity; ++d) total += f(mode.weight, d);
    }
    return total;
  };
  auto slot = [&](int r, int d) { return slot_index(spec, r, d); };
  switch (kind) {
    case GlobalKind::Q_flat:
      return sum_over_slots([&](int r, int d) {
        return osc(OscKind::psi, r, d) * osc(OscKind::a, -r, d) + osc(OscKind::psi, -r, d) * osc(OscKind::a, r, d);
      });
    case GlobalKind::Q_R_flat:
      return sum_over_slots([&](int n, int d) {
        return osc(OscKind::psi, -n, d) * osc(OscKind::a, n, d) + osc(OscKind::a, -n, d) * osc(OscKind::psi, n, d);
      });
    case GlobalKind::L_alpha:
      return sum_over_slots([&](int r, int d) { return osc(OscKind::a, -r, d) * osc(OscKind::a, r, d); });
    case GlobalKind::L_beta:
      return sum_over_slots([&](int r, int d) { return osc(OscKind::b, -r, d) * osc(OscKind::b, r, d); });
    case GlobalKind::L_psi:
      return sum_over_slots(
          [&](int r, int d) { return (osc(OscKind::psi, -r, d) * osc(OscKind::psi, r, d)).scaled(r); });
    case GlobalKind::L_K:
      return OperatorExpr::identity(GaussianRational(half(first_chern_number(spec)))) +
             global_expr(spec, GlobalKind::L_beta) - global_expr(spec, GlobalKind::L_alpha) -
             global_expr(spec, GlobalKind::L_psi);
    case GlobalKind::K:
      return sum_over_slots([&](int r, int d) {
        std::uint32_t s = slot(r, d);
        return (OperatorExpr::factor(Elementary::mul_z, s) * OperatorExpr::factor(Elementary::d_z, s) -
                OperatorExpr::factor(Elementary::mul_zbar, s) * OperatorExpr::factor(Elementary::d_zbar, s))
            .scaled(r);
      });
    case GlobalKind::Kprime:
      return sum_over_slots([&](int r, int d) {
        std::uint32_t s = slot(r, d);
        return (OperatorExpr::factor(Elementary::mul_z, s) * osc(OscKind::psi, -r, d) -
                OperatorExpr::factor(Elementary::mul_zbar, s) * osc(OscKind::psi, r, d))
            .scaled(r);
      });
    case GlobalKind::dKprime:
      return sum_over_slots([&](int r, int d) {
        return (osc(OscKind::psi, r, d) * osc(OscKind::psi, -r, d) - osc(OscKind::psi, -r, d) * osc(OscKind::psi, r, d))
            .scaled(r);
      });
    case GlobalKind::P:
      return global_expr(spec, GlobalKind::L_beta) - global_expr(spec, GlobalKind::L_alpha) -
             global_expr(spec, GlobalKind::L_psi) +
             OperatorExpr::identity(GaussianRational(-half(spec.clifford_rank) / 6));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown global operator");
}

FockOperator assemble_global(const FockSpace& space, GlobalKind kind) {
  return materialize(space, global_expr(space.spec(), kind));
}

StructureConstants zero_structure_constants(const ModeSpec& spec) {
  StructureConstants w(static_cast<std::size_t>(2 * spec.clifford_rank));
  for (auto& wi : w) {
    for (const auto& mode : spec.modes) {
      auto d = static_cast<std::size_t>(mode.multiplicity);
      wi.emplace_back(d, std::vector<Rational>(d, Rational(0)));
    }
  }
  return w;
}

StructureConstants random_structure_constants(const ModeSpec& spec, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> draw(-3, 3);
  StructureConstants w = zero_structure_constants(spec);
  for (auto& wi : w) {
    for (auto& block : wi) {
      const std::size_t d = block.size();
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j + 1; k < d; ++k) {
          block[j][k] = draw(rng);
          block[k][j] = -block[j][k];
        }
      }
    }
  }
  return w;
}

std::vector<OperatorExpr> connection_exprs(const ModeSpec& spec, const StructureConstants& w) {
  validate(spec);
  if (w.size() != static_cast<std::size_t>(2 * spec.clifford_rank)) {
    throw Error(ErrorCode::InvalidStructureConstants, "need one table per base direction (2l of them)");
  }
  std::vector<OperatorExpr> out;
  for (const auto& wi : w) {
    if (wi.size() != spec.modes.size()) throw Error(ErrorCode::InvalidStructureConstants, "need one block per mode");
    OperatorExpr di;
    for (std::size_t m = 0; m < spec.modes.size(); ++m) {
      const auto& block = wi[m];
      const int r = spec.modes[m].weight;
      const auto d = static_cast<std::size_t>(spec.modes[m].multiplicity);
      if (block.size() != d) throw Error(ErrorCode::InvalidStructureConstants, "block size differs from multiplicity");
      for (std::size_t j = 0; j < d; ++j) {
        if (block[j].size() != d) {
          throw Error(ErrorCode::InvalidStructureConstants, "block size differs from multiplicity");
        }
        for (std::size_t k = 0; k < d; ++k) {
          if (block[j][k] != -block[k][j]) {
            throw Error(ErrorCode::InvalidStructureConstants,
                        "w is not antisymmetric in (j, k) for mode " + std::to_string(r));
          }
        }
      }
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
          if (sgn(block[j][k]) == 0) continue;
          const std::uint32_t sj = slot_index(spec, r, static_cast<int>(j));
          const std::uint32_t sk = slot_index(spec, r, static_cast<int>(k));
          OperatorExpr term = OperatorExpr::factor(Elementary::mul_z, sk) * OperatorExpr::factor(Elementary::d_z, sj) +
                              OperatorExpr::factor(Elementary::mul_zbar, sk) *
                                  OperatorExpr::factor(Elementary::d_zbar, sj) +
                              OperatorExpr::factor(Elementary::psi_create, sk) *
                                  OperatorExpr::factor(Elementary::psi_annihilate, sj);
          di += term.scaled(GaussianRational(block[j][k]));
        }
      }
    }
    out.push_back(std::move(di));
  }
  return out;
}

std::vector<FockOperator> connection_action(const FockSpace& space, const StructureConstants& w) {
  std::vector<FockOperator> out;
  for (const auto& e : connection_exprs(space.spec(), w)) out.push_back(materialize(space, e));
  return out;
}

OperatorExpr connection_dirac_expr(const ModeSpec& spec, const StructureConstants& w) {
  auto d = connection_exprs(spec, w);
  OperatorExpr total;
  for (std::size_t i = 0; i < d.size(); ++i) total += clifford_expr(spec, static_cast<int>(i)) * d[i];
  return total;
}

std::vector<SparseVector> kernel_of(const FockSpace& space, const FockOperator& a) {
  if (a.matrix.rows() != space.dim() || a.matrix.cols() != space.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "operator does not act on this space");
  }
  std::vector<Index> even;
  std::vector<Index> odd;
  for (Index i = 0; i < space.dim(); ++i) (space.parity(i) == 0 ? even : odd).push_back(i);
  std::vector<SparseVector> basis;
  for (const auto* part : {&even, &odd}) {
    if (part->empty()) continue;  // an empty list would mean every column
    std::vector<SparseVector> found = null_space(a.matrix, *part);
    basis.insert(basis.end(), found.begin(), found.end());
  }
  return basis;
}

PuiseuxSeries Character::series(const Rational& offset, int order) const {
  std::vector<Rational> c(static_cast<std::size_t>(std::max(order, 0)), Rational(0));
  for (const auto& [exponent, mult] : terms) {
    Rational rel = exponent - offset;
    if (!is_integer(rel) || sgn(rel) < 0) {
      throw Error(ErrorCode::IncompatibleOffsets,
                  "character exponent " + to_string(exponent) + " is off the lattice " + to_string(offset) + " + N");
    }
    if (rel < order) c[rel.get_num().get_ui()] += Rational(mult);
  }
  return {offset, std::move(c), order};
}

Character graded_character(const FockSpace& space, const FockOperator& l, Restriction restrict,
                           std::optional<bool> supertrace) {
  const bool super = supertrace.value_or(restrict == Restriction::full_supertrace ||
                                         restrict == Restriction::wedge_only || restrict == Restriction::kernel_of_Q);
  std::vector<SparseVector> w[2];
  auto zero = [](const auto& v) { return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; }); };
  if (restrict == Restriction::kernel_of_Q) {
    FockOperator q = assemble_global(space, GlobalKind::Q_flat);
    for (auto& v : kernel_of(space, q)) {
      int p = space.parity(v.front().first);
      w[p].push_back(std::move(v));
    }
  } else {
    for (Index i = 0; i < space.dim(); ++i) {
      const FockState& s = space.state(i);
      bool keep = true;
      switch (restrict) {
        case Restriction::full_supertrace: break;
        case Restriction::S_N_only: keep = s.spinor == 0 && zero(s.zbar) && zero(s.psi); break;
        case Restriction::S_Nbar_only: keep = s.spinor == 0 && zero(s.z) && zero(s.psi); break;
        case Restriction::wedge_only: keep = s.spinor == 0 && zero(s.z) && zero(s.zbar); break;
        case Restriction::kernel_of_Q: break;
      }
      if (keep) w[space.parity(i)].push_back({{i, GaussianRational(1)}});
    }
  }
  // Eigenvalues of the level-triangular operators are their diagonal entries.
  std::set<Rational> candidates;
  bool complex_diagonal = false;
  for (Index i = 0; i < space.dim(); ++i) {
    GaussianRational d = l.matrix.at(i, i);
    if (sgn(d.imag()) != 0) complex_diagonal = true;
    Rational lambda = d.real();
    lambda.canonicalize();
    candidates.insert(lambda);
  }
  Character ch;
  for (int p = 0; p < 2; ++p) {
    if (w[p].empty()) continue;
    std::size_t found = 0;
    for (const auto& lambda : candidates) {
      std::vector<SparseVector> image;
      image.reserve(w[p].size());
      for (const auto& v : w[p]) image.push_back(add_scaled(l.matrix.apply(v), v, GaussianRational(-lambda)));
      std::size_t mult = w[p].size() - rank_of(space.dim(), image);
      if (mult == 0) continue;
      found += mult;
      Integer signed_mult(static_cast<unsigned long>(mult));
      if (super && p == 1) signed_mult = -signed_mult;
      ch.terms[lambda] += signed_mult;
    }
    if (found != w[p].size() || complex_diagonal) {
      throw Error(ErrorCode::SpectralObstruction, "operator is not diagonalizable with rational spectrum on the subspace");
    }
  }
  std::erase_if(ch.terms, [](const auto& kv) { return kv.second == 0; });
  return ch;
}

}  // namespace genuslab

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "genuslab/linalg.hpp"
#include "genuslab/series.hpp"

namespace genuslab {

struct Mode {
  int weight = 0;
  int multiplicity = 0;
};

/// Finite weight set with multiplicities, Clifford rank l (Delta has dimension 2^l)
/// and the cutoff on sum_r r * (z-degree + zbar-degree + psibar-occupancy).
struct ModeSpec {
  std::vector<Mode> modes;
  int clifford_rank = 0;
  int level_cutoff = 0;
};

/// Loop-space profile: modes n = 1..cutoff, each with multiplicity 2l.
ModeSpec ramond_spec(int clifford_rank, int cutoff);
bool is_ramond_profile(const ModeSpec& spec);
void validate(const ModeSpec& spec);
long first_chern_number(const ModeSpec& spec);

/// Basis monomial z^A zbar^S psibar^occ (x) spinor, one (A, S, occ) per slot.
/// A slot is one (mode, direction) pair; slots are ordered by mode, then direction.
struct FockState {
  std::vector<std::uint16_t> z;
  std::vector<std::uint16_t> zbar;
  std::vector<std::uint8_t> psi;
  std::uint32_t spinor = 0;

  friend bool operator==(const FockState&, const FockState&) = default;
};

struct FockStateHash {
  std::size_t operator()(const FockState& s) const noexcept;
};

class FockSpace {
 public:
  static constexpr std::size_t kDefaultBudget = 1'000'000;

  /// Enumerates the truncated basis. Throws CapacityExceeded above `budget` states.
  explicit FockSpace(ModeSpec spec, std::size_t budget = kDefaultBudget);

  const ModeSpec& spec() const { return spec_; }
  std::size_t dim() const { return states_.size(); }
  std::size_t slot_count() const { return slot_weight_.size(); }
  int slot_weight(std::size_t slot) const { return slot_weight_[slot]; }
  /// Slot of (weight, direction); throws UnknownMode.
  std::size_t slot_of(int weight, int direction) const;
  int spinor_dim() const { return 1 << spec_.clifford_rank; }

  const FockState& state(Index i) const { return states_[i]; }
  std::optional<Index> find(const FockState& s) const;
  int level(Index i) const { return levels_[i]; }
  int parity(Index i) const { return parities_[i]; }
  /// Delta (x) S(N): no zbar and no psibar.
  bool in_v_prime(Index i) const;
  std::vector<bool> level_mask(int max_level) const;

  /// Hermitian Gram matrix G with <u, v> = v^H G u.
  const SparseMatrix& gram() const { return gram_; }
  GaussianRational hermitian_form(const SparseVector& u, const SparseVector& v) const;

  std::string describe(Index i) const;

 private:
  void enumerate(std::size_t budget);
  void build_gram();

  ModeSpec spec_;
  std::vector<int> slot_weight_;
  std::vector<FockState> states_;
  std::vector<int> levels_;
  std::vector<int> parities_;
  std::unordered_map<FockState, Index, FockStateHash> index_;
  SparseMatrix gram_;
};

/// Primitive actions from which every operator is assembled.
enum class Elementary : std::uint8_t { mul_z, mul_zbar, d_z, d_zbar, psi_create, psi_annihilate, clifford };

struct Factor {
  Elementary op;
  std::uint32_t index;  // slot, or Clifford generator for `clifford`
};

/// Sum of coefficient * (product of factors, leftmost first). Evaluated without
/// truncating intermediate states, so products are exact before restriction.
class OperatorExpr {
 public:
  struct Term {
    GaussianRational coeff;
    std::vector<Factor> factors;
  };

  OperatorExpr() = default;
  static OperatorExpr identity(const GaussianRational& c = 1);
  static OperatorExpr factor(Elementary op, std::uint32_t index, const GaussianRational& c = 1);

  const std::vector<Term>& terms() const { return terms_; }
  /// 0 even, 1 odd. Zero expressions are even.
  int parity() const { return parity_; }

  OperatorExpr& operator+=(const OperatorExpr& other);
  OperatorExpr& operator-=(const OperatorExpr& other);
  OperatorExpr scaled(const GaussianRational& c) const;
  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
  friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) { return a -= b; }
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);

 private:
  std::vector<Term> terms_;
  int parity_ = 0;
};

struct FockOperator {
  SparseMatrix matrix;
  int parity = 0;
};

/// Matrix of `expr` on `space`; components leaving the truncation are dropped.
FockOperator materialize(const FockSpace& space, const OperatorExpr& expr);

FockOperator operator*(const FockOperator& a, const FockOperator& b);
FockOperator operator+(const FockOperator& a, const FockOperator& b);
FockOperator operator-(const FockOperator& a, const FockOperator& b);

/// [A, B] = AB - (-1)^{p(A)p(B)} BA.
FockOperator graded_commutator(const FockOperator& a, const FockOperator& b);

enum class OscKind { a, b, psi };

struct Oscillator {
  OscKind kind = OscKind::a;
  int signed_weight = 0;  // +r annihilation, -r creation
  int direction = 0;
};

std::string oscillator_name(const Oscillator& o);

OperatorExpr oscillator_expr(const ModeSpec& spec, const Oscillator& o);
FockOperator oscillator(const FockSpace& space, OscKind kind, int signed_weight, int direction);

/// psi_0(e_i), i < 2l: squares to -1, anti-self-adjoint.
OperatorExpr clifford_expr(const ModeSpec& spec, int i);
FockOperator clifford_generator(const FockSpace& space, int i);

/// Creation factors moved left of annihilation factors (stable), with the Koszul
/// sign of the psi transpositions.
OperatorExpr normal_order(const ModeSpec& spec, const std::vector<Oscillator>& word);
OperatorExpr product_expr(const ModeSpec& spec, const std::vector<Oscillator>& word);

enum class GlobalKind { Q_flat, Q_R_flat, L_alpha, L_beta, L_psi, L_K, K, Kprime, dKprime, P };

std::string global_name(GlobalKind kind);
OperatorExpr global_expr(const ModeSpec& spec, GlobalKind kind);
FockOperator assemble_global(const FockSpace& space, GlobalKind kind);

/// w[i][m][j][k] = w_{ij}^k(r_m) for base direction i < 2l and mode m.
using StructureConstants = std::vector<std::vector<std::vector<std::vector<Rational>>>>;

StructureConstants zero_structure_constants(const ModeSpec& spec);
/// Small random integers, antisymmetrized in (j, k); reproducible from the seed.
StructureConstants random_structure_constants(const ModeSpec& spec, std::uint32_t seed);
std::vector<OperatorExpr> connection_exprs(const ModeSpec& spec, const StructureConstants& w);
std::vector<FockOperator> connection_action(const FockSpace& space, const StructureConstants& w);
/// psi_0^i D_i summed over i.
OperatorExpr connection_dirac_expr(const ModeSpec& spec, const StructureConstants& w);

/// Exact null space of A, split by parity of the basis states.
std::vector<SparseVector> kernel_of(const FockSpace& space, const FockOperator& a);

enum class Restriction { full_supertrace, S_N_only, S_Nbar_only, wedge_only, kernel_of_Q };

struct Character {
  /// exponent -> signed multiplicity
  std::map<Rational, Integer> terms;

  /// Coefficients at offset + k for k < order; exponents must sit on that lattice.
  PuiseuxSeries series(const Rational& offset, int order) const;
};

/// Tr (+-) q^L over the restricted subspace. Supertrace by default for
/// full_supertrace, wedge_only and kernel_of_Q; plain trace otherwise.
Character graded_character(const FockSpace& space, const FockOperator& l, Restriction restrict,
                           std::optional<bool> supertrace = std::nullopt);

}  // namespace genuslab

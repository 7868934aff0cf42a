#pragma once

#include <optional>

#include "genuslab/roots.hpp"
#include "genuslab/series.hpp"

namespace genuslab {

/// Phi(M, q) = int_M Ahat(M) ch(prod_{n>=1} S_{q^n}(TM_C)) * prod_{n>=1} (1 - q^n)^{dim M}.
PuiseuxSeries phi_capital(const ManifoldData& m, int q_order);

/// Eisenstein form: int_M prod_i exp(sum_{k>=2} 2 G_{2k} x_i^{2k} / (2k)!). Needs p1_zero and dim = 4k.
PuiseuxSeries phi_witten(const ManifoldData& m, int q_order);

/// q^{-dim/24} int_M Ahat(M) ch(prod_n S_{q^n}(TM_C)), i.e. Phi / eta^{dim M}.
PuiseuxSeries ramond_index(const ManifoldData& m, int q_order);

struct ComparisonReport {
  bool equal = false;
  PuiseuxSeries lhs;
  PuiseuxSeries rhs;
  /// Index (from the offset) of the first differing coefficient.
  std::optional<int> first_difference;
};

/// Phi against phi_W, coefficient by coefficient.
ComparisonReport zagier_check(const ManifoldData& m, int q_order);

struct IntegralityReport {
  bool integral = false;
  PuiseuxSeries phi;
  std::optional<int> offending_index;
};

IntegralityReport integrality_check(const ManifoldData& m, int q_order);

/// Fits phi_W in the weight dim/2 span of E_4^a E_6^b.
ModularFit modular_weight_check(const ManifoldData& m, int q_order);

/// First index below both truncations where a and b differ (offsets must agree).
std::optional<int> first_difference(const PuiseuxSeries& a, const PuiseuxSeries& b);

}  // namespace genuslab

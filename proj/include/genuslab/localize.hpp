#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "genuslab/roots.hpp"
#include "genuslab/series.hpp"

namespace genuslab {

/// N_r: the part of the normal bundle on which the circle acts with weight r.
struct NormalSummand {
  int weight = 0;
  int dim = 0;
  /// Chern roots of N_r as linear forms in the base's tangent roots.
  std::vector<LinearForm> roots;
};

struct FixedComponent {
  ManifoldData base;
  std::vector<NormalSummand> normal;
  int orientation_sign = 1;
};

/// c_1 = sum_r r * d_r.
long first_chern_number(const FixedComponent& c);

/// Checks weights (positive, distinct), root counts, sign and the parity of c_1.
void validate(const FixedComponent& c);

/// Isolated fixed point with trivial normal roots; summands given as (weight, dim).
FixedComponent point_component(const std::vector<std::pair<int, int>>& summands, int sign = 1);

/// sign * q^{c_1/2} * int_M Ahat(M) ch(sqrt det N) prod_r ch S_{q^r}(N_r).
/// `q_order` counts coefficients from the offset c_1/2.
PuiseuxSeries component_index(const FixedComponent& c, int q_order);

/// Sum over components. Throws NoFixedPoints on an empty list.
PuiseuxSeries equivariant_index(const std::vector<FixedComponent>& components, int q_order);

struct VanishingReport {
  bool vanishes = false;
  PuiseuxSeries index;
  /// (exponent, coefficient) of the first nonzero term when the index does not vanish.
  std::optional<std::pair<Rational, Rational>> first_nonzero;
};

VanishingReport vanishing_check(const std::vector<FixedComponent>& components, int q_order);

}  // namespace genuslab

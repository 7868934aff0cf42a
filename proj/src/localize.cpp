#include "genuslab/localize.hpp"

#include <set>

#include "genuslab/error.hpp"
#include "genuslab/parallel.hpp"

namespace genuslab {

long first_chern_number(const FixedComponent& c) {
  long c1 = 0;
  for (const auto& s : c.normal) c1 += static_cast<long>(s.weight) * s.dim;
  return c1;
}

void validate(const FixedComponent& c) {
  validate(c.base);
  if (c.orientation_sign != 1 && c.orientation_sign != -1) {
    throw Error(ErrorCode::InvalidArgument, "orientation sign must be +1 or -1");
  }
  std::set<int> weights;
  for (const auto& s : c.normal) {
    if (s.weight <= 0) throw Error(ErrorCode::NonPositiveWeight, "normal weight " + std::to_string(s.weight));
    if (!weights.insert(s.weight).second) {
      throw Error(ErrorCode::InvalidArgument, "weight " + std::to_string(s.weight) + " listed twice in one component");
    }
    if (s.dim <= 0) throw Error(ErrorCode::InvalidArgument, "normal summand of weight " + std::to_string(s.weight) +
                                                                " needs positive dimension");
    if (static_cast<int>(s.roots.size()) != s.dim) {
      throw Error(ErrorCode::InvalidArgument, "normal summand of weight " + std::to_string(s.weight) + " has " +
                                                  std::to_string(s.roots.size()) + " roots for dimension " +
                                                  std::to_string(s.dim));
    }
    for (const auto& y : s.roots) {
      if (static_cast<int>(y.size()) != c.base.rank()) {
        throw Error(ErrorCode::DimensionMismatch, "normal root not expressed in the base's tangent roots");
      }
    }
  }
  long c1 = first_chern_number(c);
  if (c1 % 2 != 0) {
    throw Error(ErrorCode::OddWeightSum,
                "sum of r*d_r is " + std::to_string(c1) + "; q^{c1/2} would be branched");
  }
}

FixedComponent point_component(const std::vector<std::pair<int, int>>& summands, int sign) {
  FixedComponent c;
  c.base = make_manifold(0, {});
  c.orientation_sign = sign;
  for (const auto& [r, d] : summands) {
    NormalSummand s;
    s.weight = r;
    s.dim = d;
    s.roots.assign(static_cast<std::size_t>(std::max(d, 0)), LinearForm{});
    c.normal.push_back(std::move(s));
  }
  return c;
}

PuiseuxSeries component_index(const FixedComponent& c, int q_order) {
  validate(c);
  const ManifoldData& m = c.base;
  std::vector<LinearForm> all_roots;
  RootSeries integrand = ahat_class(m, q_order);
  for (const auto& s : c.normal) {
    all_roots.insert(all_roots.end(), s.roots.begin(), s.roots.end());
    integrand *= ch_sym(s.weight, s.roots, m.rank(), m.dim, q_order);
  }
  integrand *= sqrt_det_ch(all_roots, m.rank(), m.dim, q_order);
  PuiseuxSeries value = integrate(m, integrand);
  return value.shifted(Rational(first_chern_number(c), 2)).scaled(c.orientation_sign);
}

PuiseuxSeries equivariant_index(const std::vector<FixedComponent>& components, int q_order) {
  if (components.empty()) throw Error(ErrorCode::NoFixedPoints, "the fixed-point set is empty");
  std::vector<PuiseuxSeries> parts(components.size());
  parallel_for(components.size(), [&](std::size_t i) { parts[i] = component_index(components[i], q_order); });
  // Components may sit at different offsets; keep every exponent below the smallest common bound.
  Rational lo = parts.front().offset();
  Rational bound = parts.front().bound();
  for (const auto& p : parts) {
    lo = std::min(lo, p.offset());
    bound = std::min(bound, p.bound());
  }
  Rational span = bound - lo;  // integral: every offset c1/2 is an integer
  PuiseuxSeries total = PuiseuxSeries::zero(static_cast<int>(span.get_num().get_si()), lo);
  for (const auto& p : parts) total += p;
  return total;
}

VanishingReport vanishing_check(const std::vector<FixedComponent>& components, int q_order) {
  VanishingReport report;
  report.index = equivariant_index(components, q_order);
  report.vanishes = report.index.is_zero();
  if (!report.vanishes) report.first_nonzero = report.index.leading_term();
  return report;
}

}  // namespace genuslab

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "genuslab/roots.hpp"
#include "genuslab/series.hpp"

namespace test {

/// Canonical a/b; mpq comparisons assume canonical operands.
inline genuslab::Rational frac(long a, long b) {
  genuslab::Rational r(a, b);
  r.canonicalize();
  return r;
}

inline genuslab::PuiseuxSeries series(genuslab::Rational offset, const std::vector<long>& coeffs, int order) {
  std::vector<genuslab::Rational> c;
  for (long v : coeffs) c.emplace_back(v);
  c.resize(static_cast<std::size_t>(order));
  return {offset, c, order};
}

inline genuslab::PuiseuxSeries random_series(std::mt19937& rng, int order, genuslab::Rational offset = 0) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  std::vector<genuslab::Rational> c;
  for (int k = 0; k < order; ++k) {
    genuslab::Rational v(num(rng), den(rng));
    v.canonicalize();
    c.push_back(v);
  }
  return {offset, c, order};
}

inline std::string fixture(const std::string& name) { return std::string(GENUSLAB_FIXTURES) + "/" + name; }

/// K3: dim 4, p1 = -48.
inline genuslab::ManifoldData k3() { return genuslab::make_manifold(4, {{{1}, -48}}, true); }

/// Dim-8 tables with every p1 pairing zero.
inline genuslab::ManifoldData string8(long p2) {
  return genuslab::make_manifold(8, {{{2}, 0}, {{0, 1}, p2}}, true, true);
}

}  // namespace test

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genuslab/rational.hpp"

namespace genuslab {

/// Truncated q-series  q^offset * (c_0 + c_1 q + ... + c_{order-1} q^{order-1} + O(q^order)).
///
/// The offset is an exact rational whose denominator divides 24, which covers
/// every prefactor that shows up (eta powers and half-integral c1/2 shifts).
/// Coefficients at or beyond `order` are unknown; arithmetic always records the
/// tightest order that is still valid.
class PuiseuxSeries {
 public:
  PuiseuxSeries() = default;
  PuiseuxSeries(Rational offset, std::vector<Rational> coeffs, int order);

  static PuiseuxSeries zero(int order, Rational offset = 0);
  static PuiseuxSeries constant(const Rational& c, int order);
  /// c * q^exponent, known up to (exclusive) q^{exponent + order}.
  static PuiseuxSeries monomial(const Rational& exponent, const Rational& c, int order);

  const Rational& offset() const { return offset_; }
  int order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  /// Coefficient of q^{offset + k}; k must be < order.
  const Rational& coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  /// Coefficient of q^exponent (absolute); zero below the offset.
  Rational at(const Rational& exponent) const;
  /// Absolute exponent below which coefficients are known.
  Rational bound() const { return offset_ + order_; }

  bool is_zero() const;
  /// Drops leading zero coefficients (offset moves up, order shrinks).
  PuiseuxSeries normalized() const;
  /// First exponent carrying a nonzero coefficient.
  std::optional<std::pair<Rational, Rational>> leading_term() const;

  PuiseuxSeries truncated(int order) const;
  /// Same bound re-expressed on a lower offset (offset difference must be integral).
  PuiseuxSeries realigned(const Rational& new_offset) const;
  /// Multiplies by q^shift.
  PuiseuxSeries shifted(const Rational& shift) const;
  PuiseuxSeries scaled(const Rational& factor) const;
  /// q -> q^m for positive integer m.
  PuiseuxSeries substitute(int m) const;

  PuiseuxSeries inverse() const;
  PuiseuxSeries pow(long exponent) const;

  PuiseuxSeries& operator+=(const PuiseuxSeries& other);
  PuiseuxSeries& operator-=(const PuiseuxSeries& other);
  PuiseuxSeries& operator*=(const PuiseuxSeries& other);

  friend PuiseuxSeries operator+(PuiseuxSeries a, const PuiseuxSeries& b) { return a += b; }
  friend PuiseuxSeries operator-(PuiseuxSeries a, const PuiseuxSeries& b) { return a -= b; }
  friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend PuiseuxSeries operator-(const PuiseuxSeries& a) { return a.scaled(-1); }

  /// Both zero, or identical after normalization (offset, coefficients and bound).
  friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b);

 private:
  Rational offset_{0};
  std::vector<Rational> coeffs_;
  int order_ = 0;
};

/// True iff a and b agree on every exponent strictly below `bound`. Both series
/// must know their coefficients up to that bound.
bool agree_below(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rational& bound);

enum class SeriesOp { add, mul, neg, pow };
PuiseuxSeries qs_arith(const PuiseuxSeries& a, const PuiseuxSeries& b, SeriesOp op, long exponent = 1);

/// Bernoulli number with B_1 = -1/2. Memoized; safe for concurrent callers.
Rational bernoulli(unsigned n);

/// Divisor sum sum_{d | n} d^k.
Integer sigma(unsigned k, unsigned n);

/// G_{2k}(q) = -B_{2k}/(4k) + sum_{n>=1} sigma_{2k-1}(n) q^n, truncated at `order`.
PuiseuxSeries eisenstein(int weight, int order);

/// E_4 = 240 G_4 and E_6 = -504 G_6 (constant term 1).
PuiseuxSeries normalized_eisenstein(int weight, int order);

/// eta(q)^d = q^{d/24} prod_{n>=1} (1 - q^n)^d.
PuiseuxSeries eta_power(int d, int order);

struct ModularFit {
  int weight = 0;
  bool member = false;
  /// (a, b) -> coordinate of E_4^a E_6^b, filled when member.
  std::map<std::pair<int, int>, Rational> coordinates;
  /// Number of coefficients used in the exact solve.
  int equations = 0;
  /// Set when not a member: first coefficient index contradicting the best fit.
  std::optional<int> witness;
};

/// Basis monomials E_4^a E_6^b with 4a + 6b = weight, ordered by increasing a.
std::vector<std::pair<int, int>> modular_basis(int weight);

/// Exact membership test of s in span{E_4^a E_6^b : 4a + 6b = weight}.
ModularFit modular_fit(const PuiseuxSeries& s, int weight);

std::string to_text(const PuiseuxSeries& s);

}  // namespace genuslab

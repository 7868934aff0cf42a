#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "genuslab/series.hpp"

namespace genuslab {

/// Exponent multi-index over the root variables.
using Exponent = std::vector<int>;
/// A Chern root written as an integer combination of the tangent roots x_1..x_l.
using LinearForm = std::vector<int>;
/// Exponent vector over p_1, p_2, ... with trailing zeros stripped.
using PMonomial = std::vector<int>;

/// Power series f(y) = sum_k f_k y^k in one root variable, q-series coefficients.
using RootFunction = std::vector<PuiseuxSeries>;

/// Truncated polynomial in nilpotent degree-2 root variables with q-series coefficients.
/// `degree_cap` is cohomological (twice the monomial degree), matching the ambient dimension.
class RootSeries {
 public:
  RootSeries(int nvars, int degree_cap, int q_order);

  static RootSeries constant(int nvars, int degree_cap, const PuiseuxSeries& c);
  /// f(y) with y a linear form in the root variables.
  static RootSeries compose(const RootFunction& f, const LinearForm& y, int degree_cap, int q_order);

  int nvars() const { return nvars_; }
  int degree_cap() const { return degree_cap_; }
  int q_order() const { return q_order_; }
  const std::map<Exponent, PuiseuxSeries>& terms() const { return terms_; }
  PuiseuxSeries coefficient(const Exponent& e) const;

  /// Part of monomial degree exactly `degree` (cohomological degree 2*degree).
  RootSeries homogeneous(int degree) const;
  RootSeries scaled(const PuiseuxSeries& c) const;

  RootSeries& operator+=(const RootSeries& other);
  RootSeries& operator*=(const RootSeries& other);
  friend RootSeries operator+(RootSeries a, const RootSeries& b) { return a += b; }
  friend RootSeries operator*(const RootSeries& a, const RootSeries& b);
  friend bool operator==(const RootSeries& a, const RootSeries& b);

 private:
  void add_term(const Exponent& e, const PuiseuxSeries& c);

  int nvars_;
  int degree_cap_;
  int q_order_;
  std::map<Exponent, PuiseuxSeries> terms_;
};

/// Formal manifold: real dimension 2l, tangent roots x_1..x_l and characteristic numbers.
struct ManifoldData {
  int dim = 0;
  std::vector<std::string> roots;
  std::map<PMonomial, Rational> pairings;
  bool spin = false;
  bool p1_zero = false;

  int rank() const { return dim / 2; }
};

/// Validates and fills defaults (root names x1.., the point's unit pairing).
/// Throws InvalidArgument / InconsistentTable.
ManifoldData make_manifold(int dim, std::map<PMonomial, Rational> pairings, bool spin = false, bool p1_zero = false,
                           std::vector<std::string> roots = {});
void validate(const ManifoldData& m);

/// "p1^2*p2" <-> {2, 1}. "1" is the empty monomial.
PMonomial parse_pmonomial(std::string_view text);
std::string pmonomial_text(const PMonomial& m);

/// "x1", "-x2", "x1+2*x3", "0" over the manifold's root names.
LinearForm parse_root(std::string_view text, const std::vector<std::string>& names);
std::string root_text(const LinearForm& y, const std::vector<std::string>& names);

/// Tangent roots of TM_C: +x_i and -x_i for each i.
std::vector<LinearForm> tangent_roots(const ManifoldData& m);

/// Univariate building blocks.
RootFunction exp_function(const Rational& scale, int max_degree, int q_order);
RootFunction ahat_function(int max_degree, int q_order);
RootFunction sym_function(int weight, int max_degree, int q_order);
RootFunction wedge_function(const PuiseuxSeries& t, int max_degree);
RootFunction multiply(const RootFunction& f, const RootFunction& g);

RootSeries ahat_class(const ManifoldData& m, int q_order);
RootSeries chern_character(const std::vector<LinearForm>& roots, int nvars, int degree_cap, int q_order);
/// ch S_{q^w}(E) = prod_j (1 - q^w e^{y_j})^{-1}; w must be positive.
RootSeries ch_sym(int weight, const std::vector<LinearForm>& roots, int nvars, int degree_cap, int q_order);
/// prod_j (1 + t e^{y_j}).
RootSeries ch_wedge(const PuiseuxSeries& t, const std::vector<LinearForm>& roots, int nvars, int degree_cap,
                    int q_order);
/// e^{(sum_j y_j)/2}.
RootSeries sqrt_det_ch(const std::vector<LinearForm>& roots, int nvars, int degree_cap, int q_order);

/// Homogeneous part of monomial degree `degree` rewritten in p_j = e_j(x_1^2, ..., x_l^2).
/// Throws NotACharacteristicClass when that part is not symmetric and even.
std::map<PMonomial, PuiseuxSeries> to_pontryagin(const RootSeries& c, int degree);

/// Pairs the top-degree part with the manifold's table.
PuiseuxSeries integrate(const ManifoldData& m, const RootSeries& c);

/// M x N with disjoint roots; its table is derived from p(M x N) = p(M) p(N).
ManifoldData product_manifold(const ManifoldData& a, const ManifoldData& b);

}  // namespace genuslab

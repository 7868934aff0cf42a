#include "genuslab/witten.hpp"

#include <algorithm>

#include "genuslab/error.hpp"

namespace genuslab {

namespace {

/// prod_{n=1}^{order} ch S_{q^n}(L) for a single line with root y, as a function of y.
RootFunction loop_sym_function(int max_degree, int q_order) {
  RootFunction f = exp_function(0, max_degree, q_order);  // the constant 1
  for (int n = 1; n < q_order; ++n) f = multiply(f, sym_function(n, max_degree, q_order));
  return f;
}

RootSeries loop_integrand(const ManifoldData& m, int q_order) {
  RootFunction f = loop_sym_function(m.rank(), q_order);
  RootSeries c = ahat_class(m, q_order);
  for (const auto& y : tangent_roots(m)) c *= RootSeries::compose(f, y, m.dim, q_order);
  return c;
}

/// exp(s(x)) for a power series s with s_0 = 0.
RootFunction exp_of(const RootFunction& s, int q_order) {
  RootFunction e(s.size(), PuiseuxSeries::zero(q_order));
  if (e.empty()) return e;
  e[0] = PuiseuxSeries::constant(1, q_order);
  for (std::size_t n = 1; n < s.size(); ++n) {
    PuiseuxSeries acc = PuiseuxSeries::zero(q_order);
    for (std::size_t j = 1; j <= n; ++j) {
      if (s[j].is_zero()) continue;
      acc += (s[j] * e[n - j]).scaled(Rational(static_cast<long>(j)));
    }
    e[n] = acc.scaled(Rational(1, static_cast<long>(n)));
  }
  return e;
}

void require_witten_input(const ManifoldData& m) {
  if (m.dim % 4 != 0) {
    throw Error(ErrorCode::InvalidArgument, "phi_W needs dim divisible by 4, got " + std::to_string(m.dim));
  }
  // A point has no p1 at all, so the hypothesis holds vacuously.
  if (!m.p1_zero && m.dim > 0) {
    throw Error(ErrorCode::RequiresP1Zero, "phi_W omits the G_2 term and is only defined with p1 = 0");
  }
}

}  // namespace

PuiseuxSeries phi_capital(const ManifoldData& m, int q_order) {
  validate(m);
  PuiseuxSeries value = integrate(m, loop_integrand(m, q_order));
  PuiseuxSeries euler = PuiseuxSeries::constant(1, q_order);
  for (int n = 1; n < q_order; ++n) {
    euler *= PuiseuxSeries::constant(1, q_order) - PuiseuxSeries::monomial(n, 1, q_order - n);
  }
  return value * euler.pow(m.dim);
}

PuiseuxSeries phi_witten(const ManifoldData& m, int q_order) {
  validate(m);
  require_witten_input(m);
  const int max_degree = m.rank();
  RootFunction s(static_cast<std::size_t>(max_degree + 1), PuiseuxSeries::zero(q_order));
  for (int k = 2; 2 * k <= max_degree; ++k) {
    Rational factor = Rational(2) / Rational(factorial(static_cast<unsigned>(2 * k)));
    s[static_cast<std::size_t>(2 * k)] = eisenstein(2 * k, q_order).scaled(factor);
  }
  RootFunction w = exp_of(s, q_order);
  RootSeries c = RootSeries::constant(m.rank(), m.dim, PuiseuxSeries::constant(1, q_order));
  for (int i = 0; i < m.rank(); ++i) {
    LinearForm x(static_cast<std::size_t>(m.rank()), 0);
    x[static_cast<std::size_t>(i)] = 1;
    c *= RootSeries::compose(w, x, m.dim, q_order);
  }
  return integrate(m, c);
}

PuiseuxSeries ramond_index(const ManifoldData& m, int q_order) {
  validate(m);
  return integrate(m, loop_integrand(m, q_order)).shifted(Rational(-m.dim, 24));
}

std::optional<int> first_difference(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  if (a.offset() != b.offset()) throw Error(ErrorCode::IncompatibleOffsets, "comparison of series at different offsets");
  const int n = std::min(a.order(), b.order());
  for (int k = 0; k < n; ++k) {
    if (a.coeff(k) != b.coeff(k)) return k;
  }
  return std::nullopt;
}

ComparisonReport zagier_check(const ManifoldData& m, int q_order) {
  require_witten_input(m);
  ComparisonReport report;
  report.lhs = phi_capital(m, q_order);
  report.rhs = phi_witten(m, q_order);
  report.first_difference = first_difference(report.lhs, report.rhs);
  report.equal = !report.first_difference;
  return report;
}

IntegralityReport integrality_check(const ManifoldData& m, int q_order) {
  IntegralityReport report;
  report.phi = phi_capital(m, q_order);
  for (int k = 0; k < report.phi.order(); ++k) {
    if (!is_integer(report.phi.coeff(k))) {
      report.offending_index = k;
      break;
    }
  }
  report.integral = !report.offending_index;
  return report;
}

ModularFit modular_weight_check(const ManifoldData& m, int q_order) {
  return modular_fit(phi_witten(m, q_order), m.dim / 2);
}

}  // namespace genuslab

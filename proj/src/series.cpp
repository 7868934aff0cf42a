#include "genuslab/series.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "genuslab/error.hpp"

namespace genuslab {

namespace {

void check_offset(const Rational& offset) {
  Rational scaled = offset * 24;
  if (!is_integer(scaled)) {
    throw Error(ErrorCode::InvalidOffset, "offset " + to_string(offset) + " has denominator not dividing 24");
  }
}

long integral_difference(const Rational& a, const Rational& b) {
  Rational d = a - b;
  if (!is_integer(d)) {
    throw Error(ErrorCode::IncompatibleOffsets,
                "offsets " + to_string(a) + " and " + to_string(b) + " differ by a non-integer");
  }
  return d.get_num().get_si();
}

}  // namespace

PuiseuxSeries::PuiseuxSeries(Rational offset, std::vector<Rational> coeffs, int order)
    : offset_(std::move(offset)), coeffs_(std::move(coeffs)), order_(std::max(order, 0)) {
  offset_.canonicalize();  // callers may pass Rational(a, b) unreduced
  check_offset(offset_);
  coeffs_.resize(static_cast<std::size_t>(order_), Rational(0));
}

PuiseuxSeries PuiseuxSeries::zero(int order, Rational offset) { return {std::move(offset), {}, order}; }

PuiseuxSeries PuiseuxSeries::constant(const Rational& c, int order) {
  if (order <= 0) return zero(order);
  return {0, {c}, order};
}

PuiseuxSeries PuiseuxSeries::monomial(const Rational& exponent, const Rational& c, int order) {
  if (order <= 0) return zero(order, exponent);
  return {exponent, {c}, order};
}

Rational PuiseuxSeries::at(const Rational& exponent) const {
  Rational rel = exponent - offset_;
  if (!is_integer(rel) || sgn(rel) < 0) return 0;
  if (rel >= order_) throw Error(ErrorCode::InvalidArgument, "coefficient beyond truncation requested");
  return coeffs_[rel.get_num().get_ui()];
}

bool PuiseuxSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return sgn(c) == 0; });
}

PuiseuxSeries PuiseuxSeries::normalized() const {
  std::size_t k = 0;
  while (k < coeffs_.size() && sgn(coeffs_[k]) == 0) ++k;
  if (k == 0) return *this;
  std::vector<Rational> rest(coeffs_.begin() + static_cast<long>(k), coeffs_.end());
  return {offset_ + static_cast<long>(k), std::move(rest), order_ - static_cast<int>(k)};
}

std::optional<std::pair<Rational, Rational>> PuiseuxSeries::leading_term() const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (sgn(coeffs_[k]) != 0) return std::make_pair(offset_ + static_cast<long>(k), coeffs_[k]);
  }
  return std::nullopt;
}

PuiseuxSeries PuiseuxSeries::truncated(int order) const {
  if (order >= order_) return *this;
  std::vector<Rational> c(coeffs_.begin(), coeffs_.begin() + std::max(order, 0));
  return {offset_, std::move(c), order};
}

PuiseuxSeries PuiseuxSeries::realigned(const Rational& new_offset) const {
  long shift = integral_difference(offset_, new_offset);
  if (shift < 0) throw Error(ErrorCode::InvalidArgument, "realignment must lower the offset");
  std::vector<Rational> c(static_cast<std::size_t>(shift), Rational(0));
  c.insert(c.end(), coeffs_.begin(), coeffs_.end());
  return {new_offset, std::move(c), order_ + static_cast<int>(shift)};
}

PuiseuxSeries PuiseuxSeries::shifted(const Rational& shift) const { return {offset_ + shift, coeffs_, order_}; }

PuiseuxSeries PuiseuxSeries::scaled(const Rational& factor) const {
  PuiseuxSeries r = *this;
  for (auto& c : r.coeffs_) c *= factor;
  return r;
}

PuiseuxSeries PuiseuxSeries::substitute(int m) const {
  if (m <= 0) throw Error(ErrorCode::InvalidArgument, "substitution q -> q^m needs m > 0");
  // The first unknown term q^{order} lands on q^{m*order}; the gaps are exact zeros.
  std::vector<Rational> c(static_cast<std::size_t>(order_) * static_cast<std::size_t>(m), Rational(0));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k * static_cast<std::size_t>(m)] = coeffs_[k];
  return {offset_ * m, std::move(c), order_ * m};
}

PuiseuxSeries& PuiseuxSeries::operator+=(const PuiseuxSeries& other) {
  Rational lo = std::min(offset_, other.offset_);
  Rational hi_bound = std::min(bound(), other.bound());
  integral_difference(offset_, other.offset_);
  long order = integral_difference(hi_bound, lo);
  std::vector<Rational> c(static_cast<std::size_t>(std::max(order, 0L)), Rational(0));
  auto accumulate = [&](const PuiseuxSeries& s) {
    long base = integral_difference(s.offset_, lo);
    for (std::size_t k = 0; k < s.coeffs_.size(); ++k) {
      long idx = base + static_cast<long>(k);
      if (idx >= order) break;
      c[static_cast<std::size_t>(idx)] += s.coeffs_[k];
    }
  };
  accumulate(*this);
  accumulate(other);
  *this = PuiseuxSeries(lo, std::move(c), static_cast<int>(std::max(order, 0L)));
  return *this;
}

PuiseuxSeries& PuiseuxSeries::operator-=(const PuiseuxSeries& other) { return *this += other.scaled(-1); }

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  int order = std::min(a.order_, b.order_);
  std::vector<Rational> c(static_cast<std::size_t>(order), Rational(0));
  for (int i = 0; i < order; ++i) {
    const Rational& ai = a.coeffs_[static_cast<std::size_t>(i)];
    if (sgn(ai) == 0) continue;
    for (int j = 0; i + j < order; ++j) {
      const Rational& bj = b.coeffs_[static_cast<std::size_t>(j)];
      if (sgn(bj) == 0) continue;
      c[static_cast<std::size_t>(i + j)] += ai * bj;
    }
  }
  return {a.offset_ + b.offset_, std::move(c), order};
}

PuiseuxSeries& PuiseuxSeries::operator*=(const PuiseuxSeries& other) { return *this = *this * other; }

PuiseuxSeries PuiseuxSeries::inverse() const {
  PuiseuxSeries s = normalized();
  if (s.order_ == 0 || sgn(s.coeffs_[0]) == 0) {
    throw Error(ErrorCode::NotInvertible, "series has no nonzero known coefficient");
  }
  std::vector<Rational> inv(static_cast<std::size_t>(s.order_), Rational(0));
  Rational lead_inv = 1 / s.coeffs_[0];
  inv[0] = lead_inv;
  for (int n = 1; n < s.order_; ++n) {
    Rational acc = 0;
    for (int k = 1; k <= n; ++k) acc += s.coeffs_[static_cast<std::size_t>(k)] * inv[static_cast<std::size_t>(n - k)];
    inv[static_cast<std::size_t>(n)] = -acc * lead_inv;
  }
  return {-s.offset_, std::move(inv), s.order_};
}

PuiseuxSeries PuiseuxSeries::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  PuiseuxSeries result = constant(1, order_);
  PuiseuxSeries base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  bool az = a.is_zero();
  bool bz = b.is_zero();
  if (az || bz) return az && bz;
  PuiseuxSeries na = a.normalized();
  PuiseuxSeries nb = b.normalized();
  return na.offset_ == nb.offset_ && na.order_ == nb.order_ && na.coeffs_ == nb.coeffs_;
}

bool agree_below(const PuiseuxSeries& a, const PuiseuxSeries& b, const Rational& bound) {
  if (a.bound() < bound || b.bound() < bound) {
    throw Error(ErrorCode::NeedMoreOrder, "comparison bound " + to_string(bound) + " exceeds a truncation");
  }
  PuiseuxSeries d = a.truncated(static_cast<int>(integral_difference(bound, a.offset()))) -
                    b.truncated(static_cast<int>(integral_difference(bound, b.offset())));
  return d.is_zero();
}

PuiseuxSeries qs_arith(const PuiseuxSeries& a, const PuiseuxSeries& b, SeriesOp op, long exponent) {
  switch (op) {
    case SeriesOp::add: return a + b;
    case SeriesOp::mul: return a * b;
    case SeriesOp::neg: return -a;
    case SeriesOp::pow: return a.pow(exponent);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown series operation");
}

Rational bernoulli(unsigned n) {
  static std::shared_mutex mutex;
  static std::vector<Rational> table{Rational(1)};
  {
    std::shared_lock lock(mutex);
    if (n < table.size()) return table[n];
  }
  std::unique_lock lock(mutex);
  // sum_{k=0}^{m} C(m+1, k) B_k = 0
  while (table.size() <= n) {
    auto m = static_cast<unsigned>(table.size());
    Rational acc = 0;
    for (unsigned k = 0; k < m; ++k) acc += Rational(binomial(m + 1, k)) * table[k];
    Rational bm = -acc / Rational(m + 1);
    table.push_back(bm);
  }
  return table[n];
}

Integer sigma(unsigned k, unsigned n) {
  if (k < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "sigma needs k, n >= 1");
  Integer total = 0;
  for (unsigned d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), d, k);
    total += p;
    unsigned e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(p.get_mpz_t(), e, k);
      total += p;
    }
  }
  return total;
}

PuiseuxSeries eisenstein(int weight, int order) {
  if (weight < 2 || weight % 2 != 0) {
    throw Error(ErrorCode::InvalidWeight, "Eisenstein weight must be even and >= 2, got " + std::to_string(weight));
  }
  if (order <= 0) return PuiseuxSeries::zero(order);
  int k = weight / 2;
  std::vector<Rational> c(static_cast<std::size_t>(order));
  c[0] = -bernoulli(static_cast<unsigned>(weight)) / Rational(4 * k);
  for (int n = 1; n < order; ++n) {
    c[static_cast<std::size_t>(n)] = Rational(sigma(static_cast<unsigned>(weight - 1), static_cast<unsigned>(n)));
  }
  return {0, std::move(c), order};
}

PuiseuxSeries normalized_eisenstein(int weight, int order) {
  PuiseuxSeries g = eisenstein(weight, order);
  if (order <= 0) return g;
  return g.scaled(1 / g.coeff(0));
}

PuiseuxSeries eta_power(int d, int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "eta_power needs order >= 1");
  PuiseuxSeries product = PuiseuxSeries::constant(1, order);
  for (int n = 1; n < order; ++n) {
    std::vector<Rational> f(static_cast<std::size_t>(order), Rational(0));
    f[0] = 1;
    f[static_cast<std::size_t>(n)] = -1;
    product *= PuiseuxSeries(0, std::move(f), order);
  }
  return product.pow(d).shifted(Rational(d, 24));
}

std::vector<std::pair<int, int>> modular_basis(int weight) {
  std::vector<std::pair<int, int>> basis;
  for (int a = 0; 4 * a <= weight; ++a) {
    int rest = weight - 4 * a;
    if (rest % 6 == 0) basis.emplace_back(a, rest / 6);
  }
  return basis;
}

ModularFit modular_fit(const PuiseuxSeries& s, int weight) {
  if (weight < 0 || weight % 2 != 0) {
    throw Error(ErrorCode::InvalidWeight, "modular weight must be even and >= 0");
  }
  if (!is_integer(s.offset()) || sgn(s.offset()) < 0) {
    throw Error(ErrorCode::InvalidArgument, "modular fit needs a q-series with integral offset >= 0");
  }
  PuiseuxSeries series = s.realigned(0);
  auto basis = modular_basis(weight);
  const int dim = static_cast<int>(basis.size());
  const int rows = series.order();
  if (rows < dim + 1) {
    throw Error(ErrorCode::NeedMoreOrder, "need order >= " + std::to_string(dim + 1) + " to overdetermine weight " +
                                              std::to_string(weight));
  }

  std::vector<PuiseuxSeries> columns;
  PuiseuxSeries e4 = normalized_eisenstein(4, rows);
  PuiseuxSeries e6 = normalized_eisenstein(6, rows);
  for (auto [a, b] : basis) columns.push_back(e4.pow(a) * e6.pow(b));

  // Incremental Gauss-Jordan on the augmented rows [basis coefficients | s].
  std::vector<std::vector<Rational>> pivots;
  std::vector<int> pivot_cols;
  ModularFit fit;
  fit.weight = weight;
  fit.equations = rows;
  for (int n = 0; n < rows; ++n) {
    std::vector<Rational> row(static_cast<std::size_t>(dim + 1));
    for (int j = 0; j < dim; ++j) row[static_cast<std::size_t>(j)] = columns[static_cast<std::size_t>(j)].coeff(n);
    row[static_cast<std::size_t>(dim)] = series.coeff(n);
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      Rational f = row[static_cast<std::size_t>(pivot_cols[p])];
      if (sgn(f) == 0) continue;
      for (int j = 0; j <= dim; ++j) row[static_cast<std::size_t>(j)] -= f * pivots[p][static_cast<std::size_t>(j)];
    }
    int lead = -1;
    for (int j = 0; j < dim; ++j) {
      if (sgn(row[static_cast<std::size_t>(j)]) != 0) {
        lead = j;
        break;
      }
    }
    if (lead < 0) {
      if (sgn(row[static_cast<std::size_t>(dim)]) != 0) {
        fit.member = false;
        fit.witness = n;
        return fit;
      }
      continue;
    }
    Rational inv = 1 / row[static_cast<std::size_t>(lead)];
    for (auto& x : row) x *= inv;
    for (auto& prow : pivots) {
      Rational f = prow[static_cast<std::size_t>(lead)];
      if (sgn(f) == 0) continue;
      for (int j = 0; j <= dim; ++j) prow[static_cast<std::size_t>(j)] -= f * row[static_cast<std::size_t>(j)];
    }
    pivots.push_back(std::move(row));
    pivot_cols.push_back(lead);
  }
  if (static_cast<int>(pivots.size()) < dim) {
    throw Error(ErrorCode::NeedMoreOrder, "basis not separated by " + std::to_string(rows) + " coefficients");
  }
  fit.member = true;
  for (std::size_t p = 0; p < pivots.size(); ++p) {
    fit.coordinates[basis[static_cast<std::size_t>(pivot_cols[p])]] = pivots[p][static_cast<std::size_t>(dim)];
  }
  return fit;
}

std::string to_text(const PuiseuxSeries& s) {
  if (s.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < s.order(); ++k) {
    const Rational& c = s.coeff(k);
    if (sgn(c) == 0) continue;
    Rational e = s.offset() + k;
    Rational mag = abs(c);
    os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
    first = false;
    bool unit = (mag == 1);
    if (sgn(e) == 0) {
      os << to_string(mag);
      continue;
    }
    if (!unit) os << to_string(mag) << "*";
    os << "q";
    if (e != 1) {
      if (is_integer(e) && sgn(e) > 0) {
        os << "^" << to_string(e);
      } else {
        os << "^(" << to_string(e) << ")";
      }
    }
  }
  Rational b = s.bound();
  os << " + O(q";
  if (b != 1) os << (is_integer(b) && sgn(b) > 0 ? "^" + to_string(b) : "^(" + to_string(b) + ")");
  os << ")";
  return os.str();
}

}  // namespace genuslab

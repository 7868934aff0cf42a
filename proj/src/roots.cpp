#include "genuslab/roots.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "genuslab/error.hpp"

namespace genuslab {

namespace {

int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

PMonomial trimmed(PMonomial m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
  return m;
}

int pweight(const PMonomial& m) {
  int w = 0;
  for (std::size_t j = 0; j < m.size(); ++j) w += static_cast<int>(j + 1) * m[j];
  return w;
}

using IntPoly = std::map<Exponent, Integer>;

IntPoly multiply(const IntPoly& a, const IntPoly& b) {
  IntPoly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponent e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out[e] += ca * cb;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

/// e_j(u_1..u_n) as a 0/1 exponent polynomial.
IntPoly elementary(int n, int j) {
  IntPoly out;
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + j, true);
  do {
    Exponent e(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) e[static_cast<std::size_t>(k)] = pick[static_cast<std::size_t>(k)] ? 1 : 0;
    out[e] = 1;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

IntPoly elementary_monomial(int n, const std::vector<int>& b) {
  IntPoly out{{Exponent(static_cast<std::size_t>(n), 0), Integer(1)}};
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j] == 0) continue;
    IntPoly ej = elementary(n, static_cast<int>(j + 1));
    for (int t = 0; t < b[j]; ++t) out = multiply(out, ej);
  }
  return out;
}

/// All p-monomials of weight w (sum j*b_j = w).
void partitions(int remaining, int max_part, PMonomial& current, std::vector<PMonomial>& out) {
  if (remaining == 0) {
    out.push_back(trimmed(current));
    return;
  }
  for (int j = std::min(remaining, max_part); j >= 1; --j) {
    if (current.size() < static_cast<std::size_t>(j)) current.resize(static_cast<std::size_t>(j), 0);
    ++current[static_cast<std::size_t>(j - 1)];
    partitions(remaining - j, j, current, out);
    --current[static_cast<std::size_t>(j - 1)];
  }
}

int parse_positive(const std::string& digits, std::string_view context) {
  if (digits.empty() || digits.size() > 6 ||
      !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw Error(ErrorCode::ParseError, "bad integer in '" + std::string(context) + "'");
  }
  return std::stoi(digits);
}

// Cuts c at the absolute exponent `bound`, so every term shares one truncation
// and an absent monomial means 0 + O(q^bound).
PuiseuxSeries below(const PuiseuxSeries& c, int bound) {
  const Rational room = Rational(bound) - c.offset();
  if (sgn(room) <= 0) return PuiseuxSeries::zero(0, c.offset());
  Integer n;
  mpz_cdiv_q(n.get_mpz_t(), room.get_num_mpz_t(), room.get_den_mpz_t());
  return c.truncated(static_cast<int>(n.get_si()));
}

}  // namespace

RootSeries::RootSeries(int nvars, int degree_cap, int q_order)
    : nvars_(nvars), degree_cap_(degree_cap), q_order_(q_order) {
  if (nvars < 0 || degree_cap < 0) throw Error(ErrorCode::InvalidArgument, "negative root count or degree cap");
}

RootSeries RootSeries::constant(int nvars, int degree_cap, const PuiseuxSeries& c) {
  RootSeries r(nvars, degree_cap, c.order());
  r.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
  return r;
}

void RootSeries::add_term(const Exponent& e, const PuiseuxSeries& c) {
  if (total_degree(e) * 2 > degree_cap_) return;
  PuiseuxSeries cut = below(c, q_order_);
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (!cut.is_zero()) terms_.emplace(e, std::move(cut));
    return;
  }
  it->second += cut;
  if (it->second.is_zero()) terms_.erase(it);
}

RootSeries RootSeries::compose(const RootFunction& f, const LinearForm& y, int degree_cap, int q_order) {
  const int n = static_cast<int>(y.size());
  RootSeries linear(n, degree_cap, q_order);
  for (int k = 0; k < n; ++k) {
    if (y[static_cast<std::size_t>(k)] == 0) continue;
    Exponent e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(k)] = 1;
    linear.add_term(e, PuiseuxSeries::constant(y[static_cast<std::size_t>(k)], q_order));
  }
  RootSeries result(n, degree_cap, q_order);
  RootSeries power = constant(n, degree_cap, PuiseuxSeries::constant(1, q_order));
  for (std::size_t k = 0; k < f.size() && static_cast<int>(k) * 2 <= degree_cap; ++k) {
    if (k > 0) {
      power *= linear;
      if (power.terms_.empty()) break;
    }
    result += power.scaled(f[k]);
  }
  return result;
}

PuiseuxSeries RootSeries::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? PuiseuxSeries::zero(q_order_) : it->second;
}

RootSeries RootSeries::homogeneous(int degree) const {
  RootSeries r(nvars_, degree_cap_, q_order_);
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) == degree) r.terms_.emplace(e, c);
  }
  return r;
}

RootSeries RootSeries::scaled(const PuiseuxSeries& c) const {
  RootSeries r(nvars_, degree_cap_, std::min(q_order_, c.order()));
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

RootSeries& RootSeries::operator+=(const RootSeries& other) {
  if (nvars_ != other.nvars_) throw Error(ErrorCode::DimensionMismatch, "root series over different variables");
  q_order_ = std::min(q_order_, other.q_order_);
  for (auto& [e, c] : terms_) c = c.truncated(q_order_);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

RootSeries& RootSeries::operator*=(const RootSeries& other) { return *this = *this * other; }

RootSeries operator*(const RootSeries& a, const RootSeries& b) {
  if (a.nvars_ != b.nvars_) throw Error(ErrorCode::DimensionMismatch, "root series over different variables");
  RootSeries r(a.nvars_, std::min(a.degree_cap_, b.degree_cap_), std::min(a.q_order_, b.q_order_));
  const int max_degree = r.degree_cap_ / 2;
  Exponent e(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ea, ca] : a.terms_) {
    int da = total_degree(ea);
    for (const auto& [eb, cb] : b.terms_) {
      if (da + total_degree(eb) > max_degree) continue;
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

bool operator==(const RootSeries& a, const RootSeries& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  auto ib = b.terms_.begin();
  for (const auto& [e, c] : a.terms_) {
    if (e != ib->first || !(c == ib->second)) return false;
    ++ib;
  }
  return true;
}

void validate(const ManifoldData& m) {
  if (m.dim < 0 || m.dim % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "manifold dimension must be even and nonnegative, got " +
                                                std::to_string(m.dim));
  }
  if (static_cast<int>(m.roots.size()) != m.rank()) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(m.rank()) + " tangent roots");
  }
  std::set<std::string> names(m.roots.begin(), m.roots.end());
  if (names.size() != m.roots.size()) throw Error(ErrorCode::InvalidArgument, "tangent root names must be distinct");
  for (const auto& [mono, value] : m.pairings) {
    if (mono != trimmed(mono) || std::any_of(mono.begin(), mono.end(), [](int b) { return b < 0; })) {
      throw Error(ErrorCode::InconsistentTable, "malformed monomial in pairing table");
    }
    if (4 * pweight(mono) != m.dim) {
      throw Error(ErrorCode::InconsistentTable,
                  "monomial " + pmonomial_text(mono) + " does not have top degree " + std::to_string(m.dim));
    }
    if (m.p1_zero && !mono.empty() && mono[0] > 0 && sgn(value) != 0) {
      throw Error(ErrorCode::InconsistentTable,
                  "p1_zero is set but " + pmonomial_text(mono) + " pairs to " + to_string(value));
    }
  }
}

ManifoldData make_manifold(int dim, std::map<PMonomial, Rational> pairings, bool spin, bool p1_zero,
                           std::vector<std::string> roots) {
  ManifoldData m;
  m.dim = dim;
  m.spin = spin;
  m.p1_zero = p1_zero;
  if (dim >= 0 && roots.empty()) {
    for (int i = 1; i <= dim / 2; ++i) roots.push_back("x" + std::to_string(i));
  }
  m.roots = std::move(roots);
  for (auto& [mono, value] : pairings) m.pairings[trimmed(mono)] = value;
  if (dim == 0 && m.pairings.empty()) m.pairings[{}] = 1;
  validate(m);
  return m;
}

PMonomial parse_pmonomial(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty() || s == "1") return {};
  PMonomial m;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t stop = s.find('*', start);
    std::string factor = s.substr(start, stop == std::string::npos ? std::string::npos : stop - start);
    if (factor.size() < 2 || factor[0] != 'p') {
      throw Error(ErrorCode::ParseError, "bad Pontryagin monomial '" + std::string(text) + "'");
    }
    std::size_t caret = factor.find('^');
    int index = parse_positive(factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1), text);
    int power = caret == std::string::npos ? 1 : parse_positive(factor.substr(caret + 1), text);
    if (index == 0) throw Error(ErrorCode::ParseError, "p0 is not a generator in '" + std::string(text) + "'");
    if (m.size() < static_cast<std::size_t>(index)) m.resize(static_cast<std::size_t>(index), 0);
    m[static_cast<std::size_t>(index - 1)] += power;
    if (stop == std::string::npos) break;
    start = stop + 1;
  }
  return trimmed(m);
}

std::string pmonomial_text(const PMonomial& m) {
  std::string out;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += "p" + std::to_string(j + 1);
    if (m[j] > 1) out += "^" + std::to_string(m[j]);
  }
  return out.empty() ? "1" : out;
}

LinearForm parse_root(std::string_view text, const std::vector<std::string>& names) {
  LinearForm y(names.size(), 0);
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty root");
  if (s == "0") return y;
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw Error(ErrorCode::ParseError, "bad root '" + std::string(text) + "'");
    }
    std::size_t end = s.find_first_of("+-", pos);
    std::string term = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    int coefficient = 1;
    std::size_t star = term.find('*');
    if (star != std::string::npos) {
      coefficient = parse_positive(term.substr(0, star), text);
      term = term.substr(star + 1);
    }
    auto it = std::find(names.begin(), names.end(), term);
    if (it == names.end()) throw Error(ErrorCode::ParseError, "unknown root '" + term + "' in '" + std::string(text) + "'");
    y[static_cast<std::size_t>(it - names.begin())] += sign * coefficient;
    pos = end == std::string::npos ? s.size() : end;
  }
  return y;
}

std::string root_text(const LinearForm& y, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t k = 0; k < y.size(); ++k) {
    int c = y[k];
    if (c == 0) continue;
    if (c < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    if (std::abs(c) != 1) out += std::to_string(std::abs(c)) + "*";
    out += k < names.size() ? names[k] : "x" + std::to_string(k + 1);
  }
  return out.empty() ? "0" : out;
}

std::vector<LinearForm> tangent_roots(const ManifoldData& m) {
  std::vector<LinearForm> out;
  for (int i = 0; i < m.rank(); ++i) {
    LinearForm y(static_cast<std::size_t>(m.rank()), 0);
    y[static_cast<std::size_t>(i)] = 1;
    out.push_back(y);
    y[static_cast<std::size_t>(i)] = -1;
    out.push_back(y);
  }
  return out;
}

RootFunction exp_function(const Rational& scale, int max_degree, int q_order) {
  RootFunction f;
  Rational term = 1;
  for (int k = 0; k <= max_degree; ++k) {
    if (k > 0) term = term * scale / k;
    f.push_back(PuiseuxSeries::constant(term, q_order));
  }
  return f;
}

RootFunction ahat_function(int max_degree, int q_order) {
  // sinh(y/2)/(y/2) = sum_j y^{2j} / (4^j (2j+1)!), then invert as a power series.
  std::vector<Rational> s(static_cast<std::size_t>(max_degree + 1), Rational(0));
  for (int k = 0; k <= max_degree; k += 2) {
    Integer den = factorial(static_cast<unsigned>(k + 1));
    den <<= static_cast<mp_bitcnt_t>(k);
    s[static_cast<std::size_t>(k)] = Rational(1, 1) / Rational(den);
  }
  std::vector<Rational> inv(s.size(), Rational(0));
  inv[0] = 1;
  for (std::size_t n = 1; n < s.size(); ++n) {
    Rational acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc += s[k] * inv[n - k];
    inv[n] = -acc;
  }
  RootFunction f;
  for (const auto& c : inv) f.push_back(PuiseuxSeries::constant(c, q_order));
  return f;
}

RootFunction sym_function(int weight, int max_degree, int q_order) {
  if (weight <= 0) throw Error(ErrorCode::NonPositiveWeight, "S_t needs t = q^w with w > 0, got w = " + std::to_string(weight));
  // 1/(1 - q^w e^y) = sum_m q^{wm} e^{my}: coefficient of y^k is sum_m q^{wm} m^k / k!.
  RootFunction f;
  for (int k = 0; k <= max_degree; ++k) {
    std::vector<Rational> c(static_cast<std::size_t>(std::max(q_order, 0)), Rational(0));
    Rational inv_fact = Rational(1) / Rational(factorial(static_cast<unsigned>(k)));
    for (int m = 0; weight * m < q_order; ++m) {
      Integer mk;
      mpz_ui_pow_ui(mk.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
      c[static_cast<std::size_t>(weight * m)] = Rational(mk) * inv_fact;
    }
    f.emplace_back(0, std::move(c), q_order);
  }
  return f;
}

RootFunction wedge_function(const PuiseuxSeries& t, int max_degree) {
  RootFunction f;
  // The constant 1 is exact, so give it at least the bound of t.
  Rational bound = t.bound();
  Integer ceiling;
  mpz_cdiv_q(ceiling.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  f.push_back(PuiseuxSeries::constant(1, std::max(1, static_cast<int>(ceiling.get_si()))) + t);
  for (int k = 1; k <= max_degree; ++k) {
    f.push_back(t.scaled(Rational(1) / Rational(factorial(static_cast<unsigned>(k)))));
  }
  return f;
}

RootFunction multiply(const RootFunction& f, const RootFunction& g) {
  std::size_t n = std::min(f.size(), g.size());
  RootFunction h;
  for (std::size_t k = 0; k < n; ++k) {
    PuiseuxSeries acc = f[0] * g[k];
    for (std::size_t i = 1; i <= k; ++i) acc += f[i] * g[k - i];
    h.push_back(std::move(acc));
  }
  return h;
}

RootSeries ahat_class(const ManifoldData& m, int q_order) {
  const int l = m.rank();
  RootFunction f = ahat_function(l, q_order);
  RootSeries r = RootSeries::constant(l, m.dim, PuiseuxSeries::constant(1, q_order));
  for (int i = 0; i < l; ++i) {
    LinearForm x(static_cast<std::size_t>(l), 0);
    x[static_cast<std::size_t>(i)] = 1;
    r *= RootSeries::compose(f, x, m.dim, q_order);
  }
  return r;
}

RootSeries chern_character(const std::vector<LinearForm>& roots, int nvars, int degree_cap, int q_order) {
  RootFunction f = exp_function(1, degree_cap / 2, q_order);
  RootSeries r(nvars, degree_cap, q_order);
  for (const auto& y : roots) r += RootSeries::compose(f, y, degree_cap, q_order);
  return r;
}

RootSeries ch_sym(int weight, const std::vector<LinearForm>& roots, int nvars, int degree_cap, int q_order) {
  RootFunction f = sym_function(weight, degree_cap / 2, q_order);
  RootSeries r = RootSeries::constant(nvars, degree_cap, PuiseuxSeries::constant(1, q_order));
  for (const auto& y : roots) r *= RootSeries::compose(f, y, degree_cap, q_order);
  return r;
}

RootSeries ch_wedge(const PuiseuxSeries& t, const std::vector<LinearForm>& roots, int nvars, int degree_cap,
                    int q_order) {
  RootFunction f = wedge_function(t.truncated(q_order), degree_cap / 2);
  RootSeries r = RootSeries::constant(nvars, degree_cap, PuiseuxSeries::constant(1, q_order));
  for (const auto& y : roots) r *= RootSeries::compose(f, y, degree_cap, q_order);
  return r;
}

RootSeries sqrt_det_ch(const std::vector<LinearForm>& roots, int nvars, int degree_cap, int q_order) {
  LinearForm total(static_cast<std::size_t>(nvars), 0);
  for (const auto& y : roots) {
    if (static_cast<int>(y.size()) != nvars) throw Error(ErrorCode::DimensionMismatch, "root over wrong variables");
    for (int k = 0; k < nvars; ++k) total[static_cast<std::size_t>(k)] += y[static_cast<std::size_t>(k)];
  }
  return RootSeries::compose(exp_function(Rational(1, 2), degree_cap / 2, q_order), total, degree_cap, q_order);
}

std::map<PMonomial, PuiseuxSeries> to_pontryagin(const RootSeries& c, int degree) {
  const int n = c.nvars();
  std::map<PMonomial, PuiseuxSeries> out;
  // Work in u_i = x_i^2.
  std::map<Exponent, PuiseuxSeries> poly;
  const RootSeries part = c.homogeneous(degree);
  for (const auto& [e, coeff] : part.terms()) {
    Exponent u(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] % 2 != 0) {
        throw Error(ErrorCode::NotACharacteristicClass, "degree-" + std::to_string(2 * degree) +
                                                            " part has a monomial odd in a root");
      }
      u[k] = e[k] / 2;
    }
    poly.emplace(std::move(u), coeff);
  }
  std::map<std::vector<int>, IntPoly> cache;
  while (!poly.empty()) {
    auto lead = std::prev(poly.end());
    const Exponent a = lead->first;
    const PuiseuxSeries coeff = lead->second;
    std::vector<int> b(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
      int next = j + 1 < n ? a[static_cast<std::size_t>(j + 1)] : 0;
      b[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j)] - next;
      if (b[static_cast<std::size_t>(j)] < 0) {
        throw Error(ErrorCode::NotACharacteristicClass, "degree-" + std::to_string(2 * degree) +
                                                            " part is not symmetric in the roots");
      }
    }
    auto [it, fresh] = cache.try_emplace(b);
    if (fresh) it->second = elementary_monomial(n, b);
    for (const auto& [e, k] : it->second) {
      auto slot = poly.find(e);
      PuiseuxSeries term = coeff.scaled(Rational(k));
      if (slot == poly.end()) {
        poly.emplace(e, -term);
      } else {
        slot->second -= term;
        if (slot->second.is_zero()) poly.erase(slot);
      }
    }
    out.emplace(trimmed(b), coeff);
  }
  return out;
}

PuiseuxSeries integrate(const ManifoldData& m, const RootSeries& c) {
  if (c.nvars() != m.rank()) {
    throw Error(ErrorCode::DimensionMismatch, "class has " + std::to_string(c.nvars()) + " roots, manifold " +
                                                  std::to_string(m.rank()));
  }
  PuiseuxSeries total = PuiseuxSeries::zero(c.q_order());
  if (m.dim % 4 != 0) {
    // No Pontryagin number lives in this degree; still reject non-characteristic input.
    to_pontryagin(c, m.rank());
    return total;
  }
  for (const auto& [mono, coeff] : to_pontryagin(c, m.rank())) {
    if (coeff.is_zero()) continue;
    auto it = m.pairings.find(mono);
    if (it == m.pairings.end()) {
      throw Error(ErrorCode::MissingPairing, "no characteristic number for " + pmonomial_text(mono));
    }
    total += coeff.scaled(it->second);
  }
  return total;
}

ManifoldData product_manifold(const ManifoldData& a, const ManifoldData& b) {
  ManifoldData m;
  m.dim = a.dim + b.dim;
  for (int i = 1; i <= m.rank(); ++i) m.roots.push_back("x" + std::to_string(i));
  m.spin = a.spin && b.spin;
  m.p1_zero = a.p1_zero && b.p1_zero;
  if (m.dim % 4 != 0 || a.dim % 4 != 0 || b.dim % 4 != 0) {
    if (m.dim == 0) m.pairings[{}] = 1;
    // Every Pontryagin number of M x N factors through a degree that vanishes.
    if (m.dim % 4 == 0) {
      std::vector<PMonomial> monos;
      PMonomial scratch;
      partitions(m.dim / 4, m.dim / 4, scratch, monos);
      for (const auto& mono : monos) m.pairings[mono] = 0;
    }
    validate(m);
    return m;
  }
  const int wa = a.dim / 4;
  const int w = m.dim / 4;
  // Polynomials in (p(M), p(N)) keyed by the pair of exponent vectors.
  using BiPoly = std::map<std::pair<PMonomial, PMonomial>, Integer>;
  auto bimul = [](const BiPoly& x, const BiPoly& y) {
    BiPoly out;
    for (const auto& [kx, cx] : x) {
      for (const auto& [ky, cy] : y) {
        PMonomial l = kx.first;
        PMonomial r = kx.second;
        l.resize(std::max(l.size(), ky.first.size()), 0);
        r.resize(std::max(r.size(), ky.second.size()), 0);
        for (std::size_t j = 0; j < ky.first.size(); ++j) l[j] += ky.first[j];
        for (std::size_t j = 0; j < ky.second.size(); ++j) r[j] += ky.second[j];
        out[{trimmed(l), trimmed(r)}] += cx * cy;
      }
    }
    return out;
  };
  auto generator = [](int j) {
    BiPoly p;
    for (int s = 0; s <= j; ++s) {
      PMonomial l(static_cast<std::size_t>(s), 0);
      PMonomial r(static_cast<std::size_t>(j - s), 0);
      if (s > 0) l[static_cast<std::size_t>(s - 1)] = 1;
      if (j - s > 0) r[static_cast<std::size_t>(j - s - 1)] = 1;
      p[{l, r}] += 1;
    }
    return p;
  };
  auto lookup = [](const ManifoldData& f, const PMonomial& mono) {
    auto it = f.pairings.find(mono);
    if (it == f.pairings.end()) {
      throw Error(ErrorCode::MissingPairing, "factor lacks characteristic number " + pmonomial_text(mono));
    }
    return it->second;
  };
  std::vector<PMonomial> monos;
  PMonomial scratch;
  partitions(w, w, scratch, monos);
  for (const auto& mono : monos) {
    BiPoly poly{{{PMonomial{}, PMonomial{}}, Integer(1)}};
    for (std::size_t j = 0; j < mono.size(); ++j) {
      for (int t = 0; t < mono[j]; ++t) poly = bimul(poly, generator(static_cast<int>(j + 1)));
    }
    Rational value = 0;
    for (const auto& [key, coeff] : poly) {
      if (coeff == 0 || pweight(key.first) != wa) continue;
      value += Rational(coeff) * lookup(a, key.first) * lookup(b, key.second);
    }
    m.pairings[mono] = value;
  }
  validate(m);
  return m;
}

}  // namespace genuslab

#include "genuslab/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "toml.hpp"

#include "genuslab/error.hpp"

namespace genuslab {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail_at(const toml::node& node, const std::string& what) {
  const auto& src = node.source();
  throw Error(ErrorCode::ParseError, "line " + std::to_string(src.begin.line) + ": " + what);
}

long get_int(const toml::table& t, std::string_view key, std::optional<long> fallback = std::nullopt) {
  const toml::node* n = t.get(key);
  if (n == nullptr) {
    if (fallback) return *fallback;
    fail_at(static_cast<const toml::node&>(t), "missing key '" + std::string(key) + "'");
  }
  if (auto v = n->value_exact<int64_t>()) return static_cast<long>(*v);
  fail_at(*n, "'" + std::string(key) + "' must be an integer");
}

bool get_bool(const toml::table& t, std::string_view key, bool fallback) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return fallback;
  if (auto v = n->value_exact<bool>()) return *v;
  fail_at(*n, "'" + std::string(key) + "' must be true or false");
}

/// Integers, or strings holding an exact rational.
Rational get_rational(const toml::node& n) {
  if (auto v = n.value_exact<int64_t>()) return Rational(static_cast<long>(*v));
  if (auto s = n.value_exact<std::string>()) {
    try {
      return parse_rational(*s);
    } catch (const Error& e) {
      fail_at(n, e.what());
    }
  }
  fail_at(n, "expected an integer or a rational string such as \"-1/2\"");
}

std::vector<std::string> get_strings(const toml::table& t, std::string_view key) {
  std::vector<std::string> out;
  const toml::node* n = t.get(key);
  if (n == nullptr) return out;
  const toml::array* arr = n->as_array();
  if (arr == nullptr) fail_at(*n, "'" + std::string(key) + "' must be an array of strings");
  for (const auto& item : *arr) {
    auto s = item.value_exact<std::string>();
    if (!s) fail_at(item, "'" + std::string(key) + "' must contain strings");
    out.push_back(*s);
  }
  return out;
}

/// Partitions of k as exponent vectors over p_1..p_k.
void partitions(int remaining, int max_part, PMonomial& current, std::vector<PMonomial>& out) {
  if (remaining == 0) {
    PMonomial m = current;
    while (!m.empty() && m.back() == 0) m.pop_back();
    out.push_back(m);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    if (current.size() < static_cast<std::size_t>(part)) current.resize(static_cast<std::size_t>(part), 0);
    ++current[static_cast<std::size_t>(part - 1)];
    partitions(remaining - part, part, current, out);
    --current[static_cast<std::size_t>(part - 1)];
  }
}

void require_complete_table(const ManifoldData& m, const toml::node& where) {
  if (m.dim % 4 != 0) return;
  std::vector<PMonomial> needed;
  PMonomial scratch;
  partitions(m.dim / 4, m.dim / 4, scratch, needed);
  for (const auto& mono : needed) {
    if (!m.pairings.contains(mono)) {
      const auto line = where.source().begin.line;
      throw Error(ErrorCode::MissingPairing, "line " + std::to_string(line) + ": no pairing for " +
                                                 pmonomial_text(mono) + " in dimension " + std::to_string(m.dim));
    }
  }
}

std::map<PMonomial, Rational> read_pairings(const toml::node* node) {
  std::map<PMonomial, Rational> out;
  if (node == nullptr) return out;
  const toml::table* t = node->as_table();
  if (t == nullptr) fail_at(*node, "pairings must be a table such as { \"p1^2\" = \"-48\" }");
  for (const auto& [key, value] : *t) {
    PMonomial mono;
    try {
      mono = parse_pmonomial(key.str());
    } catch (const Error& e) {
      fail_at(value, e.what());
    }
    out[mono] = get_rational(value);
  }
  return out;
}

/// A manifold table: dim, optional roots, spin, p1_zero and pairings (inline or `extra`).
ManifoldData read_manifold(const toml::table& t, const toml::node* extra_pairings) {
  const long dim = get_int(t, "dim");
  auto pairings = read_pairings(t.get("pairings"));
  for (auto& [mono, value] : read_pairings(extra_pairings)) {
    if (pairings.contains(mono)) fail_at(*extra_pairings, "pairing " + pmonomial_text(mono) + " given twice");
    pairings[mono] = value;
  }
  ManifoldData m;
  try {
    m = make_manifold(static_cast<int>(dim), std::move(pairings), get_bool(t, "spin", false),
                      get_bool(t, "p1_zero", false), get_strings(t, "roots"));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidArgument) throw;
    fail_at(static_cast<const toml::node&>(t), e.what());
  }
  require_complete_table(m, t);
  return m;
}

FixedComponent read_component(const toml::table& t) {
  FixedComponent c;
  c.orientation_sign = static_cast<int>(get_int(t, "sign", 1));
  const toml::node* base = t.get("base");
  if (base == nullptr || base->value_exact<std::string>() == std::optional<std::string>("point")) {
    c.base = make_manifold(0, {});
  } else if (const toml::table* bt = base->as_table()) {
    c.base = read_manifold(*bt, nullptr);
  } else {
    fail_at(*base, "base must be \"point\" or a manifold table");
  }
  const toml::node* normal = t.get("normal");
  if (normal == nullptr) fail_at(static_cast<const toml::node&>(t), "fixed component without normal summands");
  const toml::array* arr = normal->as_array();
  if (arr == nullptr) fail_at(*normal, "normal must be an array of tables");
  for (const auto& item : *arr) {
    const toml::table* st = item.as_table();
    if (st == nullptr) fail_at(item, "normal summand must be a table { weight, dim, roots }");
    NormalSummand s;
    s.weight = static_cast<int>(get_int(*st, "weight"));
    s.dim = static_cast<int>(get_int(*st, "dim"));
    auto roots = get_strings(*st, "roots");
    if (roots.empty()) roots.assign(static_cast<std::size_t>(std::max(s.dim, 0)), "0");
    for (const auto& r : roots) {
      try {
        s.roots.push_back(parse_root(r, c.base.roots));
      } catch (const Error& e) {
        fail_at(item, e.what());
      }
    }
    c.normal.push_back(std::move(s));
  }
  validate(c);
  return c;
}

FockInput read_fock(const toml::table& t) {
  FockInput f;
  f.clifford_rank = static_cast<int>(get_int(t, "clifford_rank", 0));
  if (t.contains("cutoff")) f.cutoff = static_cast<int>(get_int(t, "cutoff"));
  f.ramond = get_bool(t, "ramond", false);
  if (const toml::node* modes = t.get("modes")) {
    if (f.ramond) fail_at(*modes, "a Ramond profile fixes its own modes");
    const toml::array* arr = modes->as_array();
    if (arr == nullptr) fail_at(*modes, "modes must be an array of { weight, multiplicity } tables");
    for (const auto& item : *arr) {
      const toml::table* mt = item.as_table();
      if (mt == nullptr) fail_at(item, "mode must be a table { weight, multiplicity }");
      f.modes.push_back({static_cast<int>(get_int(*mt, "weight")), static_cast<int>(get_int(*mt, "multiplicity"))});
    }
  }
  f.resolve(0);  // validates weights and multiplicities
  return f;
}

}  // namespace

ModeSpec FockInput::resolve(int fallback_cutoff) const {
  const int c = cutoff.value_or(fallback_cutoff);
  if (ramond) return ramond_spec(clifford_rank, c);
  ModeSpec spec{modes, clifford_rank, c};
  validate(spec);
  return spec;
}

namespace {

std::string rational_string(const Rational& r) { return to_string(r); }

Rational rational_from(const json& j) {
  if (!j.is_string()) throw Error(ErrorCode::ParseError, "expected a rational string, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

}  // namespace

InputFile parse_input_text(std::string_view text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(e.source().begin.line) + ": " + std::string(e.description()));
  }
  InputFile in;
  for (const auto& [key, node] : root) {
    const std::string k(key.str());
    if (k != "manifold" && k != "pairings" && k != "fixed_component" && k != "fock") {
      fail_at(node, "unknown section [" + k + "]");
    }
  }
  if (const toml::node* m = root.get("manifold")) {
    const toml::table* t = m->as_table();
    if (t == nullptr) fail_at(*m, "[manifold] must be a table");
    in.manifold = read_manifold(*t, root.get("pairings"));
  } else if (const toml::node* p = root.get("pairings")) {
    fail_at(*p, "[pairings] without [manifold]");
  }
  if (const toml::node* fc = root.get("fixed_component")) {
    const toml::array* arr = fc->as_array();
    if (arr == nullptr) fail_at(*fc, "use [[fixed_component]] blocks");
    for (const auto& item : *arr) {
      const toml::table* t = item.as_table();
      if (t == nullptr) fail_at(item, "fixed component must be a table");
      in.components.push_back(read_component(*t));
    }
  }
  if (const toml::node* f = root.get("fock")) {
    const toml::table* t = f->as_table();
    if (t == nullptr) fail_at(*f, "[fock] must be a table");
    in.fock = read_fock(*t);
  }
  return in;
}

InputFile parse_input(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_input_text(buffer.str(), path.string());
}

std::vector<Mode> parse_modes(std::string_view text) {
  std::vector<Mode> modes;
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorCode::ParseError, "bad mode list '" + std::string(text) + "'; expected weight:multiplicity,...");
    }
    return v;
  };
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    std::size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      modes.push_back({to_int(item), 1});
    } else {
      modes.push_back({to_int(item.substr(0, colon)), to_int(item.substr(colon + 1))});
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return modes;
}

nlohmann::ordered_json to_json(const PuiseuxSeries& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(rational_string(c));
  return json{{"offset", rational_string(s.offset())}, {"coeffs", coeffs}, {"order", s.order()}};
}

PuiseuxSeries series_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("offset") || !j.contains("coeffs") || !j.contains("order")) {
    throw Error(ErrorCode::ParseError, "series JSON needs offset, coeffs and order");
  }
  std::vector<Rational> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(rational_from(c));
  if (!j.at("order").is_number_integer()) throw Error(ErrorCode::ParseError, "order must be an integer");
  const int order = j.at("order").get<int>();
  if (static_cast<int>(coeffs.size()) != order) {
    throw Error(ErrorCode::ParseError, "series JSON lists " + std::to_string(coeffs.size()) + " coefficients for order " +
                                           std::to_string(order));
  }
  return {rational_from(j.at("offset")), std::move(coeffs), order};
}

nlohmann::ordered_json to_json(const ModularFit& fit) {
  json coords = json::array();
  for (const auto& [ab, value] : fit.coordinates) {
    coords.push_back(json{{"e4", ab.first}, {"e6", ab.second}, {"value", rational_string(value)}});
  }
  json j{{"weight", fit.weight}, {"member", fit.member}, {"equations", fit.equations}, {"coordinates", coords}};
  j["witness"] = fit.witness ? json(*fit.witness) : json(nullptr);
  return j;
}

ModularFit modular_fit_from_json(const nlohmann::ordered_json& j) {
  ModularFit fit;
  try {
    fit.weight = j.at("weight").get<int>();
    fit.member = j.at("member").get<bool>();
    fit.equations = j.at("equations").get<int>();
    for (const auto& c : j.at("coordinates")) {
      fit.coordinates[{c.at("e4").get<int>(), c.at("e6").get<int>()}] = rational_from(c.at("value"));
    }
    if (!j.at("witness").is_null()) fit.witness = j.at("witness").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("modular fit JSON: ") + e.what());
  }
  return fit;
}

bool operator==(const ModularFit& a, const ModularFit& b) {
  return a.weight == b.weight && a.member == b.member && a.coordinates == b.coordinates &&
         a.equations == b.equations && a.witness == b.witness;
}

bool operator==(const WittenReport& a, const WittenReport& b) {
  return a.phi == b.phi && a.phi_w == b.phi_w && a.ramond == b.ramond && a.zagier == b.zagier &&
         a.integral == b.integral && a.modular_fit == b.modular_fit;
}

WittenReport witten_report(const ManifoldData& m, int q_order) {
  WittenReport r;
  IntegralityReport integ = integrality_check(m, q_order);
  r.phi = integ.phi;
  r.integral = integ.integral;
  r.ramond = ramond_index(m, q_order);
  if ((m.p1_zero || m.dim == 0) && m.dim % 4 == 0) {
    r.phi_w = phi_witten(m, q_order);
    r.zagier = !first_difference(r.phi, *r.phi_w).has_value();
    r.modular_fit = modular_fit(*r.phi_w, m.dim / 2);
  }
  return r;
}

nlohmann::ordered_json to_json(const WittenReport& r) {
  json j;
  j["phi"] = to_json(r.phi);
  j["phi_w"] = r.phi_w ? to_json(*r.phi_w) : json(nullptr);
  j["ramond"] = to_json(r.ramond);
  j["zagier"] = r.zagier ? json(*r.zagier) : json(nullptr);
  j["integral"] = r.integral;
  j["modular_fit"] = r.modular_fit ? to_json(*r.modular_fit) : json(nullptr);
  return j;
}

WittenReport witten_report_from_json(const nlohmann::ordered_json& j) {
  WittenReport r;
  try {
    r.phi = series_from_json(j.at("phi"));
    if (!j.at("phi_w").is_null()) r.phi_w = series_from_json(j.at("phi_w"));
    r.ramond = series_from_json(j.at("ramond"));
    if (!j.at("zagier").is_null()) r.zagier = j.at("zagier").get<bool>();
    r.integral = j.at("integral").get<bool>();
    if (!j.at("modular_fit").is_null()) r.modular_fit = modular_fit_from_json(j.at("modular_fit"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("witten report JSON: ") + e.what());
  }
  return r;
}

nlohmann::ordered_json to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back(json{{"name", c.name}, {"status", std::string(to_string(c.status))}, {"detail", c.detail}});
  }
  return arr;
}

std::string series_table(const PuiseuxSeries& s) {
  if (s.is_zero()) return "0";
  std::vector<std::pair<std::string, std::string>> rows;
  for (int k = 0; k < s.order(); ++k) {
    if (sgn(s.coeff(k)) == 0) continue;
    rows.emplace_back("q^" + to_string(s.offset() + k), to_string(s.coeff(k)));
  }
  std::size_t w1 = 0;
  std::size_t w2 = 0;
  for (const auto& [e, c] : rows) {
    w1 = std::max(w1, e.size());
    w2 = std::max(w2, c.size());
  }
  std::ostringstream os;
  for (const auto& [e, c] : rows) {
    os << e << std::string(w1 - e.size() + 2 + w2 - c.size(), ' ') << c << '\n';
  }
  os << "O(q^" << to_string(s.bound()) << ')';
  return os.str();
}

}  // namespace genuslab

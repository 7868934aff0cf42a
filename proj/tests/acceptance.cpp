// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is the number of failing criteria.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "genuslab/error.hpp"
#include "genuslab/fock_checks.hpp"
#include "genuslab/io.hpp"
#include "genuslab/localize.hpp"
#include "genuslab/witten.hpp"
#include "k3_oracle.hpp"
#include "support.hpp"

using namespace genuslab;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

/// Collects failures; the first few are reported.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (ok) return;
    if (failures_.size() < 3) failures_.push_back(what);
    ++failed_;
  }
  Verdict verdict(const std::string& summary) const {
    if (failed_ == 0) return {true, summary};
    std::ostringstream os;
    os << failed_ << " of " << total_ << " failed";
    for (const auto& f : failures_) os << "; " << f;
    return {false, os.str()};
  }

 private:
  int total_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
};

std::string spec_name(const ModeSpec& s) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < s.modes.size(); ++k) os << (k ? "," : "") << s.modes[k].weight << ":" << s.modes[k].multiplicity;
  os << "} l=" << s.clifford_rank << " cutoff=" << s.level_cutoff;
  return os.str();
}

std::vector<ModeSpec> sweep_specs() {
  std::vector<ModeSpec> out;
  for (const auto& modes : mode_sweep(3, 3))
    for (int l = 0; l <= 1; ++l)
      for (int cutoff = 0; cutoff <= 6; ++cutoff) out.push_back({modes, l, cutoff});
  return out;
}

/// One pass over the sweep feeds criteria 1 to 4.
struct SweepResults {
  Tally brackets, adjoints, weitzenbock, kernel;
  std::size_t fixtures = 0;
};

const SweepResults& sweep() {
  static const SweepResults results = [] {
    SweepResults r;
    for (const ModeSpec& s : sweep_specs()) {
      ++r.fixtures;
      const std::string name = spec_name(s);
      auto record = [&](Tally& t, const CheckResult& c) { t.expect(c.status == CheckStatus::pass, name + " " + c.detail); };
      record(r.brackets, check_brackets(s));
      record(r.adjoints, check_adjoints(s));
      record(r.weitzenbock, check_weitzenbock(s));
      record(r.kernel, check_kernel(s));
    }
    return r;
  }();
  return results;
}

std::string sweep_summary() {
  return std::to_string(sweep().fixtures) + " fixtures (19 mode sets, cutoff 0..6, l = 0, 1)";
}

Verdict oscillator_algebra() { return sweep().brackets.verdict(sweep_summary()); }
Verdict adjointness() { return sweep().adjoints.verdict(sweep_summary()); }
Verdict weitzenbock() { return sweep().weitzenbock.verdict(sweep_summary()); }
Verdict supersymmetry() { return sweep().kernel.verdict(sweep_summary()); }

Verdict structure_constants() {
  Tally t;
  const std::vector<ModeSpec> fixtures = {{{{1, 2}, {2, 1}}, 1, 4}, {{{1, 3}}, 1, 3}, {{{2, 2}, {3, 1}}, 2, 3}};
  for (const auto& s : fixtures) {
    CheckResult c = check_connection(s, 10, 1);
    t.expect(c.status == CheckStatus::pass, spec_name(s) + " " + c.detail);
  }
  return t.verdict("10 antisymmetric draws on 3 fixtures");
}

Verdict character_oracle() {
  Tally t;
  for (auto [r, d] : {std::pair{2, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
    for (int cutoff = 0; cutoff <= 6; ++cutoff) {
      FockSpace f(ModeSpec{{{r, d}}, 0, cutoff});
      Character ch = graded_character(f, assemble_global(f, GlobalKind::L_K), Restriction::kernel_of_Q);
      const Rational offset = test::frac(r * d, 2);
      PuiseuxSeries index = component_index(point_component({{r, d}}), cutoff + 1);
      t.expect(ch.series(offset, cutoff + 1) == index,
               "(" + std::to_string(r) + "," + std::to_string(d) + ") cutoff " + std::to_string(cutoff));
    }
  }
  return t.verdict("(r,d) in {(2,1), (1,2), (2,2)}, cutoff 0..6");
}

Verdict atiyah_hirzebruch() {
  InputFile in = parse_input(test::fixture("s2_two_pole.toml"));
  PuiseuxSeries idx = equivariant_index(in.components, 11);
  Tally t;
  t.expect(idx.is_zero(), "index " + to_text(idx));
  t.expect(idx.bound() > 10, "bound " + to_string(idx.bound()));
  return t.verdict("two-pole S^2 index is 0 + O(q^" + to_string(idx.bound()) + ")");
}

Verdict eisenstein_eta() {
  Tally t;
  for (int w : {2, 4}) {
    PuiseuxSeries g = eisenstein(w, 21);
    for (unsigned n = 1; n <= 20; ++n) {
      Integer sum = 0;
      for (unsigned dv = 1; dv <= n; ++dv) {
        if (n % dv != 0) continue;
        Integer p = 1;
        for (int j = 0; j < w - 1; ++j) p *= dv;
        sum += p;
      }
      t.expect(g.coeff(static_cast<int>(n)) == Rational(sum), "G" + std::to_string(w) + " q^" + std::to_string(n));
    }
  }
  std::map<int, PuiseuxSeries> eta;
  for (int d = -48; d <= 48; ++d) eta.emplace(d, eta_power(d, 13));
  for (int d1 = -24; d1 <= 24; ++d1) {
    for (int d2 = -24; d2 <= 24; ++d2) {
      PuiseuxSeries lhs = eta.at(d1) * eta.at(d2);
      t.expect(lhs == eta.at(d1 + d2) && lhs.offset() == eta.at(d1 + d2).offset(),
               "eta^" + std::to_string(d1) + " eta^" + std::to_string(d2));
    }
  }
  return t.verdict("G2, G4 through q^20; 2401 eta products through q^12");
}

Verdict zagier() {
  Tally t;
  for (const char* name : {"string8_a.toml", "string8_b.toml"}) {
    ManifoldData m = *parse_input(test::fixture(name)).manifold;
    ComparisonReport r = zagier_check(m, 5);
    t.expect(r.equal, std::string(name) + " differs at index " + std::to_string(r.first_difference.value_or(-1)));
  }
  return t.verdict("Phi = phi_W through q^4 on both p1-zero fixtures");
}

Verdict witten_values() {
  ManifoldData k3 = *parse_input(test::fixture("k3.toml")).manifold;
  IntegralityReport r = integrality_check(k3, 6);
  std::vector<mpq_class> oracle = test::phi_dim4_oracle(-48, 6);
  Tally t;
  t.expect(r.phi.offset() == 0 && r.phi.coeff(0) == 2, "constant term " + to_string(r.phi.coeff(0)));
  t.expect(r.integral, "non-integral coefficient");
  t.expect(r.phi.coeff(1) == oracle[1], "q coefficient " + to_string(r.phi.coeff(1)) + " vs oracle " + oracle[1].get_str());
  for (int k = 0; k < 6; ++k) t.expect(r.phi.coeff(k) == oracle[static_cast<std::size_t>(k)], "oracle at q^" + std::to_string(k));
  return t.verdict("Phi(K3) = " + to_text(r.phi));
}

Verdict ramond_identity() {
  Tally t;
  for (const char* name : {"point.toml", "k3.toml", "hp2.toml", "string8_a.toml", "string8_b.toml"}) {
    ManifoldData m = *parse_input(test::fixture(name)).manifold;
    PuiseuxSeries lhs = ramond_index(m, 7) * eta_power(m.dim, 7);
    PuiseuxSeries rhs = phi_capital(m, 7);
    t.expect(lhs.offset() == rhs.offset() && lhs == rhs && lhs.bound() >= 7, name);
  }
  return t.verdict("5 manifold fixtures through q^6");
}

Verdict ramond_character() {
  const ModeSpec spec = ramond_spec(2, 5);
  FockSpace f(spec);
  Character ch = graded_character(f, assemble_global(f, GlobalKind::P), Restriction::kernel_of_Q, false);
  // 4 q^{-1/6} prod_{n <= 5} (1 - q^n)^{-4}, built factor by factor.
  PuiseuxSeries expected = PuiseuxSeries::constant(4, 6);
  for (int n = 1; n <= 5; ++n) {
    expected *= (PuiseuxSeries::constant(1, 6) - PuiseuxSeries::monomial(n, 1, 6 - n)).pow(-4);
  }
  expected = expected.shifted(test::frac(-1, 6));
  PuiseuxSeries got = ch.series(test::frac(-1, 6), 6);
  Tally t;
  t.expect(got == expected, to_text(got) + " vs " + to_text(expected));
  return t.verdict("dim " + std::to_string(f.dim()) + ": " + to_text(got));
}

Verdict modularity() {
  Tally t;
  for (const char* name : {"string8_a.toml", "string8_b.toml"}) {
    ManifoldData m = *parse_input(test::fixture(name)).manifold;
    ModularFit fit = modular_weight_check(m, 8);
    t.expect(fit.member && fit.weight == 4 && fit.coordinates.size() == 1 && fit.coordinates.count({1, 0}), name);
  }
  return t.verdict("phi_W in span{E4} for both p1-zero fixtures");
}

std::string capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return "popen failed";
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  out += "exit " + std::to_string(pclose(pipe)) + "\n";
  return out;
}

std::string cli_suite() {
  const std::string cli = GENUSLAB_CLI;
  const std::string fx = std::string(GENUSLAB_FIXTURES) + "/";
  const std::vector<std::string> jobs = {
      "ahat " + fx + "k3.toml",
      "ahat " + fx + "hp2.toml --format json",
      "localize " + fx + "s2_two_pole.toml --expect-vanish --order 11",
      "localize " + fx + "point_r2.toml --format json",
      "localize " + fx + "odd_weight.toml",
      "witten " + fx + "k3.toml",
      "witten " + fx + "k3.toml --format json",
      "witten " + fx + "string8_a.toml --check zagier",
      "witten " + fx + "string8_b.toml --format json --check modular",
      "ramond " + fx + "hp2.toml --order 6",
      "modular-check " + fx + "string8_a.toml --format json",
      "fock-check " + fx + "fock_r1.toml --cutoff 4",
      "fock-check --modes 2:1 --cutoff 4 --format json",
      "fock-check " + fx + "ramond_l1.toml --format json",
      "witten " + fx + "bad_syntax.toml",
      "witten " + fx + "missing_pairing.toml",
  };
  std::string all;
  for (const auto& j : jobs) all += "$ " + j + "\n" + capture(cli + " " + j + " 2>&1");
  return all;
}

Verdict determinism() {
  std::string first = cli_suite();
  std::string second = cli_suite();
  Tally t;
  t.expect(first == second, "outputs differ");
  t.expect(first.find("popen failed") == std::string::npos, "could not start the CLI");
  return t.verdict("16 CLI jobs, " + std::to_string(first.size()) + " bytes, identical across two runs");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"oscillator algebra", oscillator_algebra},
      {"adjointness", adjointness},
      {"Weitzenbock identity", weitzenbock},
      {"supersymmetry kernel", supersymmetry},
      {"structure-constant brackets", structure_constants},
      {"character/index oracle", character_oracle},
      {"Atiyah-Hirzebruch vanishing", atiyah_hirzebruch},
      {"Eisenstein and eta", eisenstein_eta},
      {"Zagier equality", zagier},
      {"Witten genus of K3", witten_values},
      {"Ramond identity", ramond_identity},
      {"Ramond character", ramond_character},
      {"modularity", modularity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].first << ": " << v.detail << " ["
              << timing << "]" << std::endl;
  }
  return failed;
}

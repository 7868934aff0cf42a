#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "genuslab/fock.hpp"
#include "genuslab/fock_checks.hpp"
#include "genuslab/localize.hpp"
#include "genuslab/roots.hpp"
#include "genuslab/series.hpp"
#include "genuslab/witten.hpp"

namespace genuslab {

/// The [fock] table. A Ramond profile derives its modes from the cutoff.
struct FockInput {
  std::vector<Mode> modes;
  int clifford_rank = 0;
  std::optional<int> cutoff;
  bool ramond = false;

  /// Mode spec at the file's cutoff, or `fallback_cutoff` when the file has none.
  ModeSpec resolve(int fallback_cutoff) const;
};

/// Everything an input file may describe. Sections are optional; commands
/// complain about the ones they need.
struct InputFile {
  std::optional<ManifoldData> manifold;
  std::vector<FixedComponent> components;
  std::optional<FockInput> fock;
};

/// TOML text with [manifold], [pairings], [[fixed_component]] and [fock] tables.
/// Syntax errors raise ParseError with the line number; domain checks run here too.
InputFile parse_input_text(std::string_view text, std::string_view source = "input");
InputFile parse_input(const std::filesystem::path& path);

/// "1:2,2:1" -> modes of weight 1 (multiplicity 2) and weight 2 (multiplicity 1).
std::vector<Mode> parse_modes(std::string_view text);

nlohmann::ordered_json to_json(const PuiseuxSeries& s);
PuiseuxSeries series_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const ModularFit& fit);
ModularFit modular_fit_from_json(const nlohmann::ordered_json& j);

struct WittenReport {
  PuiseuxSeries phi;
  std::optional<PuiseuxSeries> phi_w;  // needs p1 = 0 and dim divisible by 4
  PuiseuxSeries ramond;
  std::optional<bool> zagier;
  bool integral = false;
  std::optional<ModularFit> modular_fit;

  friend bool operator==(const WittenReport&, const WittenReport&);
};

WittenReport witten_report(const ManifoldData& m, int q_order);
nlohmann::ordered_json to_json(const WittenReport& r);
WittenReport witten_report_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const std::vector<CheckResult>& checks);

/// Aligned two-column table of exponents and nonzero coefficients, closed by
/// the O-term; the zero series prints as "0".
std::string series_table(const PuiseuxSeries& s);

bool operator==(const ModularFit& a, const ModularFit& b);

}  // namespace genuslab

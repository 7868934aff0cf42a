#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genuslab/fock.hpp"

namespace genuslab {

enum class CheckStatus { pass, fail, skipped };

std::string_view to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  std::string detail;
};

/// Heisenberg, exterior and Clifford brackets between every pair of generators.
/// Uses a space padded by the largest weight and compares on levels <= cutoff,
/// where the truncated products agree with the untruncated ones.
CheckResult check_brackets(const ModeSpec& spec);

/// G A = B^H G for each pair (a_{+r}, a_{-r}), (b_{+r}, b_{-r}), (psi_{+r}, psi_{-r});
/// G e = -e^H G for every Clifford generator.
CheckResult check_adjoints(const ModeSpec& spec);

CheckResult check_clifford(const ModeSpec& spec);
CheckResult check_gram(const ModeSpec& spec);

/// Q^2 = L_alpha + L_psi and [Q, L_K] = 0 on the truncation.
CheckResult check_weitzenbock(const ModeSpec& spec);

/// dK' = c1 - 2 L_psi and L_K = K + dK'/2.
CheckResult check_kprime(const ModeSpec& spec);

/// Q kills every basis state of V' and dim ker Q = dim V'.
CheckResult check_kernel(const ModeSpec& spec);

/// Bracket table of D_i against every oscillator, [D_M, Q] = 0 and
/// [D_i, L_alpha] = [D_i, L_beta] = [D_i, L_psi] = 0, for `draws` random w.
CheckResult check_connection(const ModeSpec& spec, int draws = 10, std::uint32_t first_seed = 1);

/// Q_R^2 = L_alpha + L_psi, [Q_R, P] = 0 and
/// Tr q^P on ker Q_R = 2^l q^{-l/12} prod_{n<=cutoff} (1 - q^n)^{-2l} through q^cutoff.
CheckResult check_ramond(const ModeSpec& spec);

/// Supertrace of q^{L_K} on ker Q against the localization term of the point
/// with the same normal weights, through q^cutoff past the offset.
CheckResult check_character(const ModeSpec& spec);

/// Every check above, in a fixed order.
std::vector<CheckResult> run_fock_suite(const ModeSpec& spec);

/// Mode lists with total multiplicity 1..max_total and weights in 1..max_weight.
std::vector<std::vector<Mode>> mode_sweep(int max_total, int max_weight);

}  // namespace genuslab

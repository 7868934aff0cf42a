#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace genuslab {

struct JobSpec {
  std::string command;  // ahat, localize, witten, ramond, fock-check, modular-check
  std::optional<std::filesystem::path> input;
  int q_order = 8;
  std::optional<int> level_cutoff;  // 4 unless the flag or the input file says otherwise
  std::string format = "text";
  bool expect_vanish = false;
  std::optional<std::string> check;  // zagier, integral or modular (witten only)
  std::optional<std::string> modes;  // "1:2,2:1" for fock-check without an input file
  std::optional<int> clifford_rank;
};

struct RunResult {
  /// 0 success, 1 a requested check failed, 2 bad input. Nothing is written to `out` on 2.
  int exit_code = 0;
  std::string out;
  std::string err;
};

const std::vector<std::string>& command_names();

RunResult run(const JobSpec& job);

}  // namespace genuslab

#include <iostream>

#include "CLI11.hpp"

#include "genuslab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact q-series for Witten genera, fixed-point indices and Fock-space operator checks"};
  genuslab::JobSpec job;
  std::string input;
  int cutoff = 4;
  std::string check;
  std::string modes;
  int clifford_rank = 0;

  app.add_option("command", job.command, "ahat | localize | witten | ramond | fock-check | modular-check")
      ->required()
      ->check(CLI::IsMember(genuslab::command_names()));
  app.add_option("input", input, "TOML input file");
  app.add_option("--order", job.q_order, "number of q-coefficients to keep")->capture_default_str();
  auto* cutoff_opt = app.add_option("--cutoff", cutoff, "Fock level cutoff (default 4)");
  app.add_option("--format", job.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_flag("--expect-vanish", job.expect_vanish, "localize: exit 1 unless the index vanishes");
  auto* check_opt =
      app.add_option("--check", check, "witten: zagier | integral | modular")->check(CLI::IsMember({"zagier", "integral", "modular"}));
  auto* modes_opt = app.add_option("--modes", modes, "fock-check: weight:multiplicity,...");
  auto* rank_opt = app.add_option("--clifford-rank", clifford_rank, "fock-check: Clifford rank l");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "genuslab: " << e.what() << '\n';
    return 2;
  }
  if (!input.empty()) job.input = input;
  if (*cutoff_opt) job.level_cutoff = cutoff;
  if (*check_opt) job.check = check;
  if (*modes_opt) job.modes = modes;
  if (*rank_opt) job.clifford_rank = clifford_rank;

  genuslab::RunResult r = genuslab::run(job);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

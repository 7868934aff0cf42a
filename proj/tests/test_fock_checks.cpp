#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "doctest.h"
#include "genuslab/fock_checks.hpp"
#include "genuslab/parallel.hpp"

using namespace genuslab;

namespace {

bool all_pass_or_skip(const std::vector<CheckResult>& rs) {
  bool ok = true;
  for (const auto& r : rs) {
    if (r.status == CheckStatus::fail) {
      MESSAGE(r.name << ": " << r.detail);
      ok = false;
    }
  }
  return ok;
}

CheckStatus status_of(const std::vector<CheckResult>& rs, const std::string& name) {
  for (const auto& r : rs) {
    if (r.name == name) return r.status;
  }
  FAIL("missing check " << name);
  return CheckStatus::fail;
}

}  // namespace

TEST_CASE("mode sweep") {
  auto sweep = mode_sweep(3, 3);
  CHECK(sweep.size() == 19);
  for (const auto& modes : sweep) {
    int total = 0;
    for (const auto& m : modes) {
      CHECK(m.weight >= 1);
      CHECK(m.weight <= 3);
      total += m.multiplicity;
    }
    CHECK(total >= 1);
    CHECK(total <= 3);
  }
  CHECK(mode_sweep(1, 2).size() == 2);
}

TEST_CASE("suite order and skip rules") {
  auto flat = run_fock_suite(ModeSpec{{{1, 1}}, 0, 4});
  const std::vector<std::string> names = {"brackets", "adjoints", "clifford", "gram_positive_definite", "weitzenbock",
                                          "kprime", "kernel_equals_v_prime", "connection", "ramond", "character"};
  REQUIRE(flat.size() == names.size());
  for (std::size_t k = 0; k < names.size(); ++k) CHECK(flat[k].name == names[k]);
  CHECK(all_pass_or_skip(flat));
  CHECK(status_of(flat, "clifford") == CheckStatus::skipped);
  CHECK(status_of(flat, "connection") == CheckStatus::skipped);
  CHECK(status_of(flat, "ramond") == CheckStatus::skipped);
  // c1 = 1 is odd, so the point term would be branched.
  CHECK(status_of(flat, "character") == CheckStatus::skipped);

  auto even = run_fock_suite(ModeSpec{{{2, 1}}, 0, 4});
  CHECK(all_pass_or_skip(even));
  CHECK(status_of(even, "character") == CheckStatus::pass);
}

TEST_CASE("mixed fixture with a Clifford factor") {
  auto rs = run_fock_suite(ModeSpec{{{1, 2}, {2, 1}}, 1, 3});
  CHECK(all_pass_or_skip(rs));
  CHECK(status_of(rs, "clifford") == CheckStatus::pass);
  CHECK(status_of(rs, "connection") == CheckStatus::pass);
  CHECK(status_of(rs, "character") == CheckStatus::skipped);
}

TEST_CASE("Ramond profile") {
  auto r = check_ramond(ramond_spec(1, 3));
  CHECK(r.status == CheckStatus::pass);
  CHECK(check_ramond(ModeSpec{{{1, 2}}, 1, 3}).status == CheckStatus::skipped);
}

TEST_CASE("individual checks over a few cutoffs") {
  for (int cutoff = 0; cutoff <= 4; ++cutoff) {
    ModeSpec s{{{1, 1}, {3, 1}}, 1, cutoff};
    CAPTURE(cutoff);
    CHECK(check_brackets(s).status == CheckStatus::pass);
    CHECK(check_adjoints(s).status == CheckStatus::pass);
    CHECK(check_weitzenbock(s).status == CheckStatus::pass);
    CHECK(check_kprime(s).status == CheckStatus::pass);
    CHECK(check_kernel(s).status == CheckStatus::pass);
    CHECK(check_gram(s).status == CheckStatus::pass);
  }
}

TEST_CASE("status names") {
  CHECK(to_string(CheckStatus::pass) == "pass");
  CHECK(to_string(CheckStatus::fail) == "fail");
  CHECK(to_string(CheckStatus::skipped) == "skipped");
}

TEST_CASE("parallel_for visits each index once and honours GENUSLAB_THREADS") {
  const char* saved = std::getenv("GENUSLAB_THREADS");
  std::string restore = saved ? saved : "";
  for (const char* threads : {"1", "3"}) {
    setenv("GENUSLAB_THREADS", threads, 1);
    CHECK(thread_budget() == static_cast<unsigned>(std::atoi(threads)));
    std::vector<std::atomic<int>> hits(200);
    parallel_for(hits.size(), [&](std::size_t i) {
      parallel_for(3, [&](std::size_t) {});  // nested calls run inline
      hits[i]++;
    });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  setenv("GENUSLAB_THREADS", "0", 1);
  CHECK(thread_budget() >= 1);

  setenv("GENUSLAB_THREADS", "4", 1);
  try {
    parallel_for(50, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
  if (saved) {
    setenv("GENUSLAB_THREADS", restore.c_str(), 1);
  } else {
    unsetenv("GENUSLAB_THREADS");
  }
}

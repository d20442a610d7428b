#pragma once

// Regression suite: every acceptance criterion as a named check with a
// pinned tolerance.  Shared between the `regress` CLI subcommand and the
// acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zerocap/sdp.hpp"

namespace zerocap {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, one line
  double seconds = 0.0;
};

struct RegressOptions {
  SolveOptions solve;
  std::uint64_t seed = 20151130;  // randomized suites are deterministic per seed
  bool quick = false;             // trims the randomized suite sizes
};

// Runs every criterion; `report` (when set) is called after each check.
std::vector<CheckResult> run_regression(const RegressOptions& opts = {},
                                        const std::function<void(const CheckResult&)>& report = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace zerocap

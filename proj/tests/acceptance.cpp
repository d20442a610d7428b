// Acceptance suite: runs every regression criterion at its pinned tolerance
// and prints one PASS/FAIL line per criterion.  Exit code 0 iff all pass.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "zerocap/regress.hpp"

int main(int argc, char** argv) {
  zerocap::RegressOptions opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opts.quick = true;
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
  }

  const auto results = zerocap::run_regression(opts, [](const zerocap::CheckResult& r) {
    std::printf("%s  %-28s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  });

  const bool ok = zerocap::all_passed(results);
  std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILURES above");
  return ok ? 0 : 1;
}

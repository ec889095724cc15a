// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <iostream>

#include "exsets/error.hpp"
#include "exsets/verify.hpp"

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const auto ctx = exsets::verify::load_context(EXSETS_SCENARIOS_DIR);
  int failed = 0;
  for (const auto& c : exsets::verify::criteria()) {
    if (!exsets::verify::matches(c, filter)) continue;
    const auto r = exsets::verify::run(c.id, ctx, filter);
    std::printf("[%s] %2d %-22s got %s | expected %s | tol %s | %.2fs of %.1fs\n", r.passed ? "PASS" : "FAIL", r.id,
                r.key.c_str(), r.got.c_str(), r.expected.c_str(), r.tolerance.c_str(), r.seconds, r.budget);
    for (const auto& d : r.details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
    failed += !r.passed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

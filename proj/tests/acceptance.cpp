// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <cstdio>
#include <string>
#include <vector>

#include "holo/validation.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) only.emplace_back(argv[i]);

  bool all = true;
  const auto results = holo::run_acceptance(only, [&](const holo::CriterionResult& r) {
    std::printf("[%s] criterion %2d: %s  (%s)  [%.1fs]\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    all = all && r.pass;
  });
  if (results.empty()) {
    std::printf("no criteria matched the filter\n");
    return 2;
  }
  std::printf("%s: %zu criteria\n", all ? "ALL PASS" : "FAILURES PRESENT", results.size());
  return all ? 0 : 1;
}

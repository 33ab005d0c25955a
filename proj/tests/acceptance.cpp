// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <optional>

#include "spdcalc/acceptance.hpp"

int main(int argc, char** argv) {
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  const auto results = spdcalc::run_acceptance(only);
  if (results.empty()) {
    std::fprintf(stderr, "no criterion %d\n", only.value_or(0));
    return 2;
  }
  bool ok = true;
  for (const auto& r : results) {
    std::cout << spdcalc::format_result(r) << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

#include <cstdio>
#include <string>

#include "qrms/repro.hpp"

// One line per acceptance criterion; exit status 1 when any criterion misses.
int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const auto results = qrms::run_repro(filter);
  int misses = 0;
  int index = 0;
  for (const auto& r : results) {
    ++index;
    std::printf("%s criterion %2d  %-18s %6.2fs  %s\n", r.pass() ? "PASS" : "FAIL", index, r.name.c_str(), r.seconds,
                r.title.c_str());
    if (!r.error.empty()) std::printf("       error: %s\n", r.error.c_str());
    for (const auto& c : r.checks) {
      if (c.pass) continue;
      std::printf("       miss: %s expected %.12g computed %.12g tol %.3g\n", c.quantity.c_str(), c.expected,
                  c.computed, c.tol);
    }
    misses += r.pass() ? 0 : 1;
  }
  std::printf("%d/%zu criteria pass\n", index - misses, results.size());
  return misses == 0 ? 0 : 1;
}

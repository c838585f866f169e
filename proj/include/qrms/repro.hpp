#pragma once

// Built-in reproduction cases: each pins published values, trivial
// consequences or randomized audits to explicit tolerances.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qrms {

enum class Provenance { Published, Trivial, Derived };
std::string to_string(Provenance p);

enum class Compare {
  Near,   ///< |computed - expected| <= tol
  Below,  ///< computed < expected
  Above,  ///< computed > expected
};

struct Check {
  std::string quantity;
  double expected = 0.0;
  double computed = 0.0;
  double tol = 0.0;
  Compare compare = Compare::Near;
  Provenance provenance = Provenance::Derived;
  bool pass = false;
};

struct CaseResult {
  std::string name;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  std::string error;  ///< set when the case threw

  bool pass() const;
};

struct ReproCase {
  std::string name;
  std::string title;
  std::function<std::vector<Check>(std::uint64_t seed)> run;
};

const std::vector<ReproCase>& repro_cases();

/// Runs every case whose name contains `filter` (all when empty).
std::vector<CaseResult> run_repro(const std::string& filter = "", std::uint64_t seed = 20240611);

}  // namespace qrms

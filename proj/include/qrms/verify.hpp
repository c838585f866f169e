#pragma once

// Randomized property suites over every module. Trial t of property k draws
// from its own RNG stream, so summaries do not depend on the worker count.

#include <cstdint>
#include <string>
#include <vector>

#include "qrms/tolerances.hpp"

namespace qrms {

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::uint64_t trials = 100;
  std::size_t max_dim = 3;
  unsigned workers = 0;  ///< 0: hardware concurrency
  Tolerances tol;
};

struct PropertySummary {
  std::string module;
  std::string name;
  std::uint64_t checked = 0;  ///< trials where the property applied
  std::uint64_t failed = 0;
  double worst = 0.0;         ///< largest residual seen
  std::string first_failure;  ///< description of the first failing trial
};

std::vector<PropertySummary> run_verify(const VerifyOptions& opts);

std::vector<std::string> property_names();

}  // namespace qrms

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdilqr/scan_lqr.hpp"

namespace pdilqr::harness {

struct SuiteResult {
  std::string name;
  int cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Oracle-equivalence and property suites. Deterministic for a given seed
/// and worker count.
std::vector<SuiteResult> run_verify_suites(std::uint64_t seed, const ScanSettings& scan);

}  // namespace pdilqr::harness

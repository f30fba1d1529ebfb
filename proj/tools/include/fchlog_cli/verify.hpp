#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fchlog::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The invariant suite behind `fchlog verify`. Uses fixed small grids and safe
/// solver settings; only the seed is taken from the caller.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

}  // namespace fchlog::cli

#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace mildflow {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in invariant suite behind `mildflow verify`: semigroup and
/// projection identities, exact-solution checks, contraction, the maximum
/// principle, snapshot round trips and zoom scaling. `quick` shrinks grids
/// and horizons. Each result is printed to `log` as it completes.
std::vector<CheckResult> run_invariant_suite(bool quick, std::ostream& log);

}  // namespace mildflow

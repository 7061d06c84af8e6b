// Fast structural checks run by `shiftpois selftest`.
#pragma once

#include <string>
#include <vector>

namespace shiftpois {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_invariants(unsigned workers);

}  // namespace shiftpois

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace roughnum::selftest {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick property suites over every module (a few seconds in total).
[[nodiscard]] std::vector<SuiteResult> run_all(std::uint64_t seed);

}  // namespace roughnum::selftest

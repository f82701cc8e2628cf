#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace linkcharge::verify {

struct SuiteResult {
  int criterion = 0;
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string detail;

  bool passed() const { return checks > 0 && failures == 0; }
  /// "criterion N name: PASS|FAIL (checks, failures; detail)".
  std::string line() const;
};

/// Suite names in criterion order.
const std::vector<std::string>& suite_names();

/// Runs one suite at full size. Throws std::invalid_argument for unknown
/// names. Deterministic for a given seed.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSeed = 20240611;

}  // namespace linkcharge::verify

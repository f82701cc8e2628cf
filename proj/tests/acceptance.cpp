#include <cstdio>

#include "linkcharge/verify.hpp"

int main() {
  using namespace linkcharge::verify;
  int failed = 0;
  for (const auto& name : suite_names()) {
    const SuiteResult r = run_suite(name, kDefaultSeed);
    std::printf("%s\n", r.line().c_str());
    std::fflush(stdout);
    if (!r.passed()) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, suite_names().size());
  return failed == 0 ? 0 : 1;
}

#include "mvc/acceptance.hpp"

#include <iostream>

int main() {
  const auto results = mvc::acceptance::run_all(std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (failed ? "acceptance: FAIL" : "acceptance: PASS") << " (" << results.size() - failed << "/"
            << results.size() << ")\n";
  return failed ? 1 : 0;
}

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvc::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  std::string report;  // deterministic text, compared across repeated runs
};

// Runs one criterion, 1..10.
CriterionResult run_criterion(int id);

// Runs every criterion in order and writes one line per criterion to `out`.
std::vector<CriterionResult> run_all(std::ostream& out);

std::string format_line(const CriterionResult& r);

}  // namespace mvc::acceptance

#pragma once

#include "mvc/allocation.hpp"
#include "mvc/code.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvc {

using SystemState = std::vector<VersionSet>;

enum class ViolationReason {
  no_version_covered,
  wrong_value,
  null_when_common,
  version_too_old,
  value_when_disjoint,
};

std::string to_string(ViolationReason reason);

struct Violation {
  SystemState system_state;
  std::vector<int> subset;  // 0-based server indices
  ViolationReason reason;
  std::string detail;
};

std::string describe(const Violation& violation);

// Nondecreasing (in mask order) c-tuples of nonempty subsets of [nu]; with
// require_common only those whose intersection is nonempty.
std::vector<SystemState> state_multisets(int nu, int c, bool require_common);

// Every multiset of c nonempty states with latest common version m must
// cover some v >= m: sum of alpha_v^(S) >= 1. First failure in multiset order.
std::optional<Violation> feasibility_check(const AllocationTable& table, int c);

struct CodecCheckReport {
  bool ok = true;
  std::optional<Violation> violation;
  std::uint64_t system_states = 0;
  std::uint64_t decodes = 0;
};

inline constexpr std::uint64_t kCodecCheckBudget = 10'000'000;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

// Estimated decoder calls: (2^nu)^n * C(n,c) * trials.
double codec_check_cost(int n, int c, int nu, int trials);

// Every system state in P([nu])^n, every c-subset, `trials` message tuples
// with pairwise distinct values. Stops at the first violation.
CodecCheckReport exhaustive_codec_check(const AbstractCode& code, int trials = 3,
                                        std::uint64_t seed = kDefaultSeed);
CodecCheckReport exhaustive_codec_check(const AllocationTable& table, int n, int c, int trials = 3,
                                        std::uint64_t seed = kDefaultSeed);

// max over nonempty S of the state's total allocation
Rational worst_case_cost(const AllocationTable& table);

// Deterministic text rendering of a report.
std::string render_report(const CodecCheckReport& report);

}  // namespace mvc

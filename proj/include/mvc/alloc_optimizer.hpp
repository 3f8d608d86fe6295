#pragma once

#include "mvc/allocation.hpp"
#include "mvc/verifier.hpp"

#include <cstdint>
#include <vector>

namespace mvc {

struct RecoveryConstraint {
  SystemState multiset;  // c nonempty states, nondecreasing mask order
  int m = 0;             // latest common version
};

inline constexpr int kOptimizerMaxVersions = 3;
inline constexpr int kOptimizerMaxQuorum = 7;

// One constraint per multiset of c nonempty states with a common version.
std::vector<RecoveryConstraint> enumerate_constraints(int c, int nu);

enum class BranchOrder { zero_first, one_first };

struct MilpOptions {
  BranchOrder order = BranchOrder::zero_first;
  // Start from the construction table as incumbent.
  bool seed_with_construction = true;
  // Violated cover rows added per separation round.
  int rows_per_round = 12;
};

struct OptimalityCertificate {
  Rational root_bound;
  std::uint64_t nodes = 0;
  std::uint64_t pruned_by_bound = 0;
  std::uint64_t infeasible_nodes = 0;
  std::uint64_t integral_leaves = 0;
  std::uint64_t incumbent_updates = 0;
  std::uint64_t lp_certificates_verified = 0;
  std::uint64_t cover_rows_added = 0;
  std::uint64_t pivots = 0;
  int max_depth = 0;
  std::size_t constraints = 0;
  bool seeded = false;
};

struct MilpResult {
  Rational alpha_star;
  AllocationTable table;
  OptimalityCertificate proof;
};

// Exact minimum alpha over separate-coding allocations: every recovery
// constraint needs some v >= m with sum over the multiset of alpha_v^(S) >= 1.
//
// Selectors y_v (per constraint) pick versions allowed to fall short; with
// big-M = 1 the linear system is  cov_v >= 1 - y_v,  sum_v y_v <= nu - m.
// Relaxations are solved with y projected out; branch-and-bound fixes y.
MilpResult solve_milp(int c, int nu, const MilpOptions& options = {});

std::string render_certificate(const OptimalityCertificate& proof);

}  // namespace mvc

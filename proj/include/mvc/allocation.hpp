#pragma once

#include "mvc/rational.hpp"
#include "mvc/version_set.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mvc {

enum class TableFamily { construction, replication, simple_mds, optimized, custom };

std::string to_string(TableFamily family);
TableFamily parse_family(const std::string& name);  // "construction", "replication", "mds", ...

// Per-state, per-version storage fractions alpha_v^(S) plus the cost alpha.
//
// Entries are dense: every nonempty S has a value for each v in S, with
// explicit zeros where a held version is not stored.
class AllocationTable {
 public:
  AllocationTable(int nu, int c, TableFamily family = TableFamily::custom);

  int n_versions() const noexcept { return nu_; }
  int quorum() const noexcept { return c_; }
  TableFamily family() const noexcept { return family_; }
  const Rational& alpha() const noexcept { return alpha_; }
  std::optional<int> t() const noexcept { return t_; }

  void set_alpha(const Rational& alpha) { alpha_ = alpha; }
  void set_t(int t) { t_ = t; }

  // alpha_v^(S); zero for v outside S. S must be a nonempty subset of [nu].
  const Rational& at(VersionSet state, int v) const;
  void set(VersionSet state, int v, const Rational& value);

  // sum over v in S of alpha_v^(S)
  Rational state_total(VersionSet state) const;

  // Nonempty states in mask order.
  std::vector<VersionSet> states() const { return nonempty_subsets(nu_); }

  // Throws PreconditionError on a negative entry or a state exceeding alpha.
  void validate() const;

  bool operator==(const AllocationTable& o) const;

 private:
  std::size_t slot(VersionSet state, int v) const;

  int nu_;
  int c_;
  TableFamily family_;
  Rational alpha_;
  std::optional<int> t_;
  std::vector<Rational> entries_;  // [mask * nu + (v - 1)]
};

int compute_t(int c, int nu);
Rational construction_alpha(int c, int nu);

AllocationTable build_construction_table(int c, int nu);
// quorum is recorded for display only; replication does not depend on it.
AllocationTable build_replication_table(int nu, int c = 1);
AllocationTable build_simple_mds_table(int c, int nu);

// min(1, nu/c): the cheaper of replication and simple MDS.
Rational min_baseline(int c, int nu);

AllocationTable build_table(TableFamily family, int c, int nu);

}  // namespace mvc

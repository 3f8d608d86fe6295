#include "mvc/alloc_optimizer.hpp"

#include "mvc/errors.hpp"
#include "mvc/exact_lp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mvc {

namespace {

void check_guard(int c, int nu) {
  if (c < 1 || nu < 1) throw PreconditionError("c and nu must be positive");
  if (nu > kOptimizerMaxVersions || c > kOptimizerMaxQuorum) {
    const double estimate = static_cast<double>(state_multisets(std::min(nu, 4), std::min(c, 12), true).size());
    throw BudgetExceededError("optimizer supports nu <= " + std::to_string(kOptimizerMaxVersions) + " and c <= " +
                                  std::to_string(kOptimizerMaxQuorum) + "; at least " +
                                  std::to_string(static_cast<long long>(estimate)) + " constraints requested",
                              estimate);
  }
}

// y_v status within one constraint
enum : std::uint8_t { kFree = 0, kZero = 1, kOne = 2 };

class Solver {
 public:
  Solver(int c, int nu, const MilpOptions& options)
      : c_(c), nu_(nu), options_(options), constraints_(enumerate_constraints(c, nu)) {
    // variable 0 is alpha, then alpha_v^(S) for S in mask order, v ascending
    int next = 1;
    var_.assign(std::size_t{1} << nu, std::vector<int>(nu + 1, -1));
    for (VersionSet s : nonempty_subsets(nu))
      for (int v : s.members()) var_[s.mask()][v] = next++;
    n_vars_ = next;

    cover_.resize(constraints_.size());
    for (std::size_t k = 0; k < constraints_.size(); ++k) {
      cover_[k].resize(nu + 1);
      for (int v = constraints_[k].m; v <= nu; ++v) {
        std::map<int, int> mult;
        for (VersionSet s : constraints_[k].multiset)
          if (s.contains(v)) ++mult[var_[s.mask()][v]];
        for (auto [var, count] : mult) cover_[k][v].push_back({var, count});
      }
    }
    proof_.constraints = constraints_.size();
  }

  MilpResult run() {
    if (options_.seed_with_construction) {
      best_table_ = build_construction_table(c_, nu_);
      incumbent_ = best_table_->alpha();
      proof_.seeded = true;
    }
    std::vector<Rational> cost(n_vars_);
    cost[0] = 1;
    lp::DualSimplex root(cost);
    for (VersionSet s : nonempty_subsets(nu_)) {
      lp::Row budget;
      budget.terms.push_back({0, 1});
      for (int v : s.members()) budget.terms.push_back({var_[s.mask()][v], -1});
      budget.rhs = 0;
      root.add_row(std::move(budget));
    }
    std::vector<std::uint8_t> status(constraints_.size() * (nu_ + 1), kFree);
    explore(std::move(root), std::move(status), 0);

    if (!incumbent_) throw ContractError("optimizer found no feasible allocation");
    return MilpResult{*incumbent_, *best_table_, proof_};
  }

 private:
  std::uint8_t& st(std::vector<std::uint8_t>& status, std::size_t k, int v) const {
    return status[k * (nu_ + 1) + v];
  }

  Rational coverage(const std::vector<Rational>& x, std::size_t k, int v) const {
    Rational sum = 0;
    for (auto [var, count] : cover_[k][v]) sum += x[var] * count;
    return sum;
  }

  int budget(std::vector<std::uint8_t>& status, std::size_t k) const {
    int ones = 0;
    for (int v = constraints_[k].m; v <= nu_; ++v) ones += st(status, k, v) == kOne;
    return nu_ - constraints_[k].m - ones;
  }

  lp::Row cover_row(std::size_t k, const std::vector<int>& versions, int rhs) const {
    std::map<int, int> coef;
    for (int v : versions)
      for (auto [var, count] : cover_[k][v]) coef[var] += count;
    lp::Row row;
    for (auto [var, count] : coef) row.terms.push_back({var, count});
    row.rhs = rhs;
    return row;
  }

  struct Cut {
    Rational violation;
    std::size_t k;
    lp::Row row;
  };

  // Most violated projected cover rows: for R* = {v free : cov_v < 1},
  // sum_{R*} cov_v >= |R*| - B.
  std::vector<Cut> separate(const std::vector<Rational>& x, std::vector<std::uint8_t>& status) const {
    std::vector<Cut> cuts;
    for (std::size_t k = 0; k < constraints_.size(); ++k) {
      const int b = budget(status, k);
      std::vector<int> short_versions;
      Rational lhs = 0;
      for (int v = constraints_[k].m; v <= nu_; ++v) {
        if (st(status, k, v) != kFree) continue;
        Rational cov = coverage(x, k, v);
        if (cov < 1) {
          short_versions.push_back(v);
          lhs += cov;
        }
      }
      const int rhs = static_cast<int>(short_versions.size()) - b;
      if (rhs <= 0 || lhs >= rhs) continue;
      cuts.push_back({Rational(rhs) - lhs, k, cover_row(k, short_versions, rhs)});
    }
    std::stable_sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.violation > b.violation; });
    return cuts;
  }

  bool integral(const std::vector<Rational>& x, std::vector<std::uint8_t>& status) const {
    for (std::size_t k = 0; k < constraints_.size(); ++k) {
      int short_count = 0;
      for (int v = constraints_[k].m; v <= nu_; ++v)
        if (st(status, k, v) == kFree && coverage(x, k, v) < 1) ++short_count;
      if (short_count > budget(status, k)) return false;
    }
    return true;
  }

  void certify(const lp::DualSimplex& lp, int depth) {
    std::string why;
    if (!lp::verify_certificate(lp.cost(), lp.rows(), lp.primal(), lp.duals(), lp.value(), &why)) {
      throw ContractError("relaxation certificate rejected: " + why);
    }
    ++proof_.lp_certificates_verified;
    if (depth == 0) proof_.root_bound = lp.value();
  }

  void explore(lp::DualSimplex lp, std::vector<std::uint8_t> status, int depth) {
    ++proof_.nodes;
    proof_.max_depth = std::max(proof_.max_depth, depth);
    const std::uint64_t pivots_before = lp.pivots();
    std::vector<Rational> x;
    while (true) {
      if (lp.solve() == lp::Status::infeasible) {
        ++proof_.infeasible_nodes;
        proof_.pivots += lp.pivots() - pivots_before;
        return;
      }
      // added rows only raise the bound
      if (incumbent_ && lp.value() >= *incumbent_) {
        certify(lp, depth);
        ++proof_.pruned_by_bound;
        proof_.pivots += lp.pivots() - pivots_before;
        return;
      }
      x = lp.primal();
      auto cuts = separate(x, status);
      if (cuts.empty()) break;
      std::set<std::string> seen;
      int added = 0;
      for (auto& cut : cuts) {
        if (added >= options_.rows_per_round) break;
        std::string key;
        for (const auto& t : cut.row.terms) key += std::to_string(t.var) + ":" + t.coef.str() + ",";
        key += ">=" + cut.row.rhs.str();
        if (!seen.insert(key).second) continue;
        lp.add_row(std::move(cut.row));
        ++added;
        ++proof_.cover_rows_added;
      }
    }
    proof_.pivots += lp.pivots() - pivots_before;

    certify(lp, depth);

    if (integral(x, status)) {
      ++proof_.integral_leaves;
      if (!incumbent_ || lp.value() < *incumbent_) {
        incumbent_ = lp.value();
        best_table_ = to_table(x);
        ++proof_.incumbent_updates;
      }
      return;
    }

    // most fractional canonical y_v = 1 - cov_v over constraints that still
    // have too many short versions; ties by (constraint, version)
    std::size_t best_k = 0;
    int best_v = 0;
    Rational best_score;
    bool found = false;
    const Rational half(1, 2);
    for (std::size_t k = 0; k < constraints_.size(); ++k) {
      std::vector<std::pair<int, Rational>> short_versions;
      for (int v = constraints_[k].m; v <= nu_; ++v) {
        if (st(status, k, v) != kFree) continue;
        Rational cov = coverage(x, k, v);
        if (cov < 1) short_versions.emplace_back(v, std::move(cov));
      }
      if (static_cast<int>(short_versions.size()) <= budget(status, k)) continue;
      for (auto& [v, cov] : short_versions) {
        const Rational y = 1 - cov;
        Rational score = abs(y - half);
        if (!found || score < best_score) {
          found = true;
          best_score = std::move(score);
          best_k = k;
          best_v = v;
        }
      }
    }
    if (!found) throw ContractError("fractional node without a branching candidate");

    auto zero_child = [&] {
      auto child_status = status;
      st(child_status, best_k, best_v) = kZero;
      lp::DualSimplex child = lp;
      child.add_row(cover_row(best_k, {best_v}, 1));
      explore(std::move(child), std::move(child_status), depth + 1);
    };
    auto one_child = [&] {
      auto child_status = status;
      st(child_status, best_k, best_v) = kOne;
      explore(lp, std::move(child_status), depth + 1);
    };
    if (options_.order == BranchOrder::zero_first) {
      zero_child();
      one_child();
    } else {
      one_child();
      zero_child();
    }
  }

  AllocationTable to_table(const std::vector<Rational>& x) const {
    AllocationTable table(nu_, c_, TableFamily::optimized);
    table.set_alpha(x[0]);
    for (VersionSet s : nonempty_subsets(nu_))
      for (int v : s.members()) table.set(s, v, x[var_[s.mask()][v]]);
    return table;
  }

  int c_;
  int nu_;
  MilpOptions options_;
  std::vector<RecoveryConstraint> constraints_;
  std::vector<std::vector<int>> var_;
  int n_vars_ = 0;
  // cover_[k][v]: (variable, multiplicity) pairs summing to cov_v of constraint k
  std::vector<std::vector<std::vector<std::pair<int, int>>>> cover_;
  std::optional<Rational> incumbent_;
  std::optional<AllocationTable> best_table_;
  OptimalityCertificate proof_;
};

}  // namespace

std::vector<RecoveryConstraint> enumerate_constraints(int c, int nu) {
  check_guard(c, nu);
  std::vector<RecoveryConstraint> out;
  for (auto& ms : state_multisets(nu, c, true)) {
    const int m = intersect_all(ms).latest();
    out.push_back({std::move(ms), m});
  }
  return out;
}

MilpResult solve_milp(int c, int nu, const MilpOptions& options) {
  check_guard(c, nu);
  if (options.rows_per_round < 1) throw PreconditionError("rows_per_round must be positive");
  Solver solver(c, nu, options);
  MilpResult result = solver.run();
  result.table.validate();
  if (auto v = feasibility_check(result.table, c)) {
    throw ContractError("optimizer returned an infeasible table: " + describe(*v));
  }
  return result;
}

std::string render_certificate(const OptimalityCertificate& proof) {
  std::ostringstream out;
  out << "constraints=" << proof.constraints << " nodes=" << proof.nodes << " pruned=" << proof.pruned_by_bound
      << " infeasible=" << proof.infeasible_nodes << " integral=" << proof.integral_leaves
      << " incumbent_updates=" << proof.incumbent_updates << " certificates=" << proof.lp_certificates_verified
      << " rows_added=" << proof.cover_rows_added << " pivots=" << proof.pivots << " max_depth=" << proof.max_depth
      << " root_bound=" << to_string(proof.root_bound) << " seeded=" << (proof.seeded ? "true" : "false");
  return out.str();
}

}  // namespace mvc

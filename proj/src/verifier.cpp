#include "mvc/verifier.hpp"

#include "mvc/errors.hpp"

#include <random>
#include <sstream>

namespace mvc {

std::string to_string(ViolationReason reason) {
  switch (reason) {
    case ViolationReason::no_version_covered: return "no-version-covered";
    case ViolationReason::wrong_value: return "wrong-value";
    case ViolationReason::null_when_common: return "null-when-common";
    case ViolationReason::version_too_old: return "version-too-old";
    case ViolationReason::value_when_disjoint: return "value-when-disjoint";
  }
  return "unknown";
}

namespace {

std::string render_state(const SystemState& states) {
  std::string out = "(";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += ",";
    out += states[i].to_string();
  }
  return out + ")";
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// c-subsets of [n] in lexicographic order
std::vector<std::vector<int>> subsets_of_size(int n, int c) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(c);
  for (int i = 0; i < c; ++i) cur[i] = i;
  if (c > n) return out;
  while (true) {
    out.push_back(cur);
    int i = c - 1;
    while (i >= 0 && cur[i] == n - c + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < c; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace

std::string describe(const Violation& violation) {
  std::ostringstream out;
  out << to_string(violation.reason) << " at state " << render_state(violation.system_state) << " servers [";
  for (std::size_t i = 0; i < violation.subset.size(); ++i) out << (i ? "," : "") << violation.subset[i] + 1;
  out << "]";
  if (!violation.detail.empty()) out << ": " << violation.detail;
  return out.str();
}

std::vector<SystemState> state_multisets(int nu, int c, bool require_common) {
  const auto states = nonempty_subsets(nu);
  const int k = static_cast<int>(states.size());
  std::vector<SystemState> out;
  std::vector<int> idx(c, 0);
  while (true) {
    SystemState ms;
    ms.reserve(c);
    for (int i : idx) ms.push_back(states[i]);
    if (!require_common || !intersect_all(ms).empty()) out.push_back(std::move(ms));
    int i = c - 1;
    while (i >= 0 && idx[i] == k - 1) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < c; ++j) idx[j] = idx[i];
  }
  return out;
}

std::optional<Violation> feasibility_check(const AllocationTable& table, int c) {
  table.validate();
  if (c < 1) throw PreconditionError("quorum must be positive");
  const int nu = table.n_versions();
  for (const auto& ms : state_multisets(nu, c, true)) {
    const int m = intersect_all(ms).latest();
    bool covered = false;
    for (int v = m; v <= nu && !covered; ++v) {
      Rational sum = 0;
      for (VersionSet s : ms) sum += table.at(s, v);
      covered = sum >= 1;
    }
    if (!covered) {
      std::vector<int> subset(c);
      for (int i = 0; i < c; ++i) subset[i] = i;
      std::string detail = "latest common version " + std::to_string(m) + "; totals";
      for (int v = m; v <= nu; ++v) {
        Rational sum = 0;
        for (VersionSet s : ms) sum += table.at(s, v);
        detail += " v" + std::to_string(v) + "=" + to_string(sum);
      }
      return Violation{ms, subset, ViolationReason::no_version_covered, detail};
    }
  }
  return std::nullopt;
}

double codec_check_cost(int n, int c, int nu, int trials) {
  double states = 1;
  for (int i = 0; i < n; ++i) states *= static_cast<double>(1u << nu);
  return states * static_cast<double>(binomial(n, c)) * trials;
}

CodecCheckReport exhaustive_codec_check(const AbstractCode& code, int trials, std::uint64_t seed) {
  const int n = code.n_servers();
  const int c = code.quorum();
  const int nu = code.n_versions();
  if (c < 1 || c > n) throw PreconditionError("quorum must be in [1, n]");
  if (trials < 1) throw PreconditionError("trials must be positive");
  const double cost = codec_check_cost(n, c, nu, trials);
  if (cost > static_cast<double>(kCodecCheckBudget)) {
    throw BudgetExceededError("exhaustive check needs about " + std::to_string(static_cast<std::uint64_t>(cost)) +
                                  " decoder calls; the limit is " + std::to_string(kCodecCheckBudget),
                              cost);
  }

  const std::size_t length = code.message_length();
  const auto subsets_all = all_subsets(nu);
  const std::size_t n_states = subsets_all.size();

  // messages[trial][v-1]; symbols[trial][server][mask]
  std::vector<std::vector<Message>> messages(trials);
  std::vector<std::vector<std::vector<Symbol>>> symbols(trials);
  std::mt19937_64 rng(seed);
  for (int tr = 0; tr < trials; ++tr) {
    auto& w = messages[tr];
    while (static_cast<int>(w.size()) < nu) {
      Message m(length);
      for (auto& b : m) b = static_cast<FieldElement>(rng() % 256);
      bool fresh = true;
      for (const auto& prev : w) fresh = fresh && prev != m;
      if (fresh) w.push_back(std::move(m));
    }
    symbols[tr].assign(n, std::vector<Symbol>(n_states));
    for (int i = 0; i < n; ++i) {
      for (VersionSet s : subsets_all) {
        std::vector<Message> held;
        for (int v : s.members()) held.push_back(w[v - 1]);
        symbols[tr][i][s.mask()] = code.encode(i, s, held);
      }
    }
  }

  const auto subsets = subsets_of_size(n, c);
  CodecCheckReport report;
  std::vector<std::size_t> digits(n, 0);
  SystemState state(n);
  std::vector<VersionSet> q_states(c);
  std::vector<Symbol> q_symbols(c);
  while (true) {
    for (int i = 0; i < n; ++i) state[i] = subsets_all[digits[i]];
    ++report.system_states;
    for (const auto& subset : subsets) {
      for (int k = 0; k < c; ++k) q_states[k] = state[subset[k]];
      const VersionSet common = intersect_all(q_states);
      const int m = common.empty() ? 0 : common.latest();
      for (int tr = 0; tr < trials; ++tr) {
        for (int k = 0; k < c; ++k) q_symbols[k] = symbols[tr][subset[k]][q_states[k].mask()];
        ++report.decodes;
        auto fail = [&](ViolationReason reason, std::string detail) {
          report.ok = false;
          report.violation = Violation{state, subset, reason, "trial " + std::to_string(tr + 1) + ": " + detail};
          return report;
        };
        std::optional<Message> got;
        try {
          got = code.decode(subset, q_states, q_symbols);
        } catch (const CodeInfeasibleError& e) {
          return fail(ViolationReason::no_version_covered, e.what());
        }
        if (m == 0) {
          if (got) return fail(ViolationReason::value_when_disjoint, "expected Null");
          continue;
        }
        if (!got) return fail(ViolationReason::null_when_common, "latest common version " + std::to_string(m));
        int matched = 0;
        for (int v = 1; v <= nu; ++v)
          if (messages[tr][v - 1] == *got) matched = v;
        if (matched == 0) return fail(ViolationReason::wrong_value, "value matches no version");
        if (matched < m) {
          return fail(ViolationReason::version_too_old,
                      "returned version " + std::to_string(matched) + " < latest common " + std::to_string(m));
        }
      }
    }
    int i = n - 1;
    while (i >= 0 && digits[i] == n_states - 1) digits[i--] = 0;
    if (i < 0) break;
    ++digits[i];
  }
  return report;
}

CodecCheckReport exhaustive_codec_check(const AllocationTable& table, int n, int c, int trials,
                                        std::uint64_t seed) {
  if (c != table.quorum()) throw PreconditionError("quorum differs from the table's");
  const TableCode code(table, n);
  return exhaustive_codec_check(code, trials, seed);
}

Rational worst_case_cost(const AllocationTable& table) {
  Rational worst = 0;
  for (VersionSet s : table.states()) worst = std::max(worst, table.state_total(s));
  return worst;
}

std::string render_report(const CodecCheckReport& report) {
  std::ostringstream out;
  out << "ok=" << (report.ok ? "true" : "false") << " states=" << report.system_states
      << " decodes=" << report.decodes;
  if (report.violation) out << " violation=" << describe(*report.violation);
  return out.str();
}

}  // namespace mvc

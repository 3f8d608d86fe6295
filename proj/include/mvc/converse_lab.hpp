#pragma once

#include "mvc/code.hpp"
#include "mvc/rational.hpp"
#include "mvc/verifier.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace mvc {

// leading - penalty, where leading is exact and penalty carries the log term.
struct BoundValue {
  Rational leading;
  long double penalty = 0;

  long double value() const { return leading.convert_to<long double>() - penalty; }
};

// nu/(c+nu-1) - log2(nu^nu * C(c+nu-1, nu)) / ((c+nu-1) * logM), except for
// nu = 2 where the subtracted term is log2(c) / ((c+1) * logM).
BoundValue theorem2_bound(int c, int nu, int logm_bits);
// The general expression for every nu, with no nu = 2 refinement.
BoundValue general_bound(int c, int nu, int logm_bits);

// log2 of a positive integer, exact to long double precision.
long double log2_int(const BigInt& x);

// ---- nu = 2 state pair -------------------------------------------------

struct StatePair {
  SystemState s1;  // decodes W1 from the first c servers
  SystemState s2;  // decodes W2; differs from s1 only at server a
  int a = 0;       // 1-based server index
};

StatePair find_state_pair_nu2(const AbstractCode& code, std::span<const Message> w);

// ---- decodable set ----------------------------------------------------

using MessageSet = std::set<Message>;

inline constexpr std::uint64_t kDecodableSetBudget = 1'000'000;

// chi_{l|T}: non-Null outputs of the decoder over the first c servers when
// servers 1..l hold `states` and servers l+1..c range over subsets of T.
MessageSet decodable_set(const AbstractCode& code, std::span<const VersionSet> states, VersionSet t,
                         std::span<const Message> w);

// ---- AuxVars ----------------------------------------------------------

struct AuxTuple {
  std::vector<Symbol> y;  // c-1 entries
  std::vector<Symbol> z;  // nu entries
  std::vector<int> a;     // nu server indices, 1-based
  std::vector<int> pi;    // permutation of [nu], 1-based

  auto operator<=>(const AuxTuple&) const = default;
};

std::string render_aux(const AuxTuple& aux);

// Initialisation value of unused Y/Z slots.
const Symbol& aux_init_symbol();

// Auxiliary tuple of pairwise distinct values. Structural invariants are
// asserted as it runs; every decoder call is also checked against the
// decode contract. Violations raise ContractError with a trace.
AuxTuple aux_vars(const AbstractCode& code, std::span<const Message> w);

// Recovers W from the auxiliary tuple, latest permuted version first.
std::vector<Message> invert_aux_vars(const AbstractCode& code, const AuxTuple& aux);

// Server states 1..serv_count of the iteration (ver_count, serv_count),
// rebuilt from A and Pi alone.
std::vector<VersionSet> reconstruct_states(int nu, const std::vector<int>& a, const std::vector<int>& pi,
                                           int ver_count, int serv_count);

// ---- bijection check ------------------------------------------------

inline constexpr std::uint64_t kBijectionBudget = 100'000;

struct BijectionReport {
  std::string code_name;
  int c = 0;
  int nu = 0;
  std::uint64_t m = 0;
  std::uint64_t tuples = 0;          // |W| enumerated
  std::uint64_t expected_tuples = 0; // M(M-1)...(M-nu+1)
  std::uint64_t distinct_images = 0;
  bool injective = false;
  bool round_trip = false;
  std::optional<std::string> counterexample;
  std::optional<std::string> contract_error;
  long double log2_images = 0;
  long double log2_counting_bound = 0;  // (c+nu-1) log2 q + log2(nu! C(c+nu-1, nu))
  bool counting_bound_ok = false;

  bool ok() const { return injective && round_trip && !contract_error && counting_bound_ok; }
};

// Runs AuxVars on every W in W (values 0..M-1 as messages) and inverts.
BijectionReport bijection_check(const AbstractCode& code, std::uint64_t m);

std::string render_report(const BijectionReport& report);

}  // namespace mvc

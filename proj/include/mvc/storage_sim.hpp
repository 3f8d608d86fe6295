#pragma once

#include "mvc/converse_lab.hpp"
#include "mvc/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mvc {

// Time-slotted write/read model. Version t is written at slot t (t >= 1);
// version 0 is present on every server before slot 1.

enum class Channel { delay, erasure };
enum class PatternMode { exhaustive, random, explicit_trace };
enum class Scheme { construction, replication };

std::string to_string(Channel c);
std::string to_string(PatternMode m);
std::string to_string(Scheme s);
Channel parse_channel(const std::string& s);
Scheme parse_scheme(const std::string& s);

struct SimConfig {
  int n = 5;
  int f = 1;
  int t = 3;  // window length
  int logm_bits = 12;
  int horizon = 5;
  Channel channel = Channel::delay;
  PatternMode mode = PatternMode::random;
  std::uint64_t seed = 20240611;
  int random_patterns = 1000;
  Scheme scheme = Scheme::construction;

  int quorum() const { return n - f; }
  void validate() const;  // PreconditionError
};

// delay[m][v-1] in [0, T-1] for the delay channel; delivered[m][v-1] for the
// erasure channel. Versions run 1..horizon.
struct ArrivalPattern {
  Channel channel = Channel::delay;
  std::vector<std::vector<int>> delay;
  std::vector<std::vector<bool>> delivered;

  bool operator==(const ArrivalPattern&) const = default;
};

// Reason the pattern breaks its channel's guarantee, if it does.
std::optional<std::string> check_pattern(const SimConfig& config, const ArrivalPattern& pattern);

// Number of candidate patterns an exhaustive run would enumerate.
long double exhaustive_pattern_count(const SimConfig& config);
inline constexpr double kPatternBudget = 1e6;

// Delay: independent uniform delays. Erasure: each packet kept with
// probability 1/2, then windows lacking a common delivery get one.
ArrivalPattern random_pattern(const SimConfig& config, std::mt19937_64& rng);

std::string render_pattern_json(const ArrivalPattern& pattern);
ArrivalPattern parse_pattern_json(const std::string& text);

// Per-server layout: L-of-N evaluation code over GF(2^w), s stripes, one
// evaluation per stripe of the latest version, plus a t mod 2T tag.
struct StorageLayout {
  int length = 1;  // L
  int count = 1;   // evaluations per stripe stored by a server
  int width = 8;   // w
  int stripes = 1; // s
  int tag_bits = 0;

  int payload_bits() const { return stripes * count * width; }
  int total_bits() const { return payload_bits() + tag_bits; }
};

// ConfigurationError when the construction scheme lacks T | (N-f-1).
StorageLayout storage_layout(const SimConfig& config, Scheme scheme);

struct ReadRecord {
  int slot = 0;
  std::uint32_t subset = 0;  // bit m set for server m
  int latest_common = 0;
  int decoded = -1;  // -1: nothing decodable
  bool ok = false;

  auto operator<=>(const ReadRecord&) const = default;
};

std::string subset_to_string(std::uint32_t subset);

struct SimReport {
  Scheme scheme = Scheme::construction;
  StorageLayout layout;
  int max_storage_bits = 0;
  std::uint64_t patterns = 0;
  std::uint64_t reads_total = 0;
  std::uint64_t failures = 0;
  std::vector<ReadRecord> reads;  // distinct, sorted
  std::map<int, std::uint64_t> staleness;  // slot - decoded -> reads
  std::optional<std::string> first_failure;

  bool ok() const { return failures == 0; }
};

// One pattern. Reads query every (N-f)-subset when every_subset is set,
// otherwise one subset per slot drawn from subset_seed. Trace lines go to
// `trace` when given.
SimReport run_simulation(const SimConfig& config, const ArrivalPattern& pattern, bool every_subset = true,
                         std::uint64_t subset_seed = 0, std::ostream* trace = nullptr);

// Exhaustive delay patterns by per-server factorization, exhaustive erasure
// patterns literally, or config.random_patterns random patterns.
SimReport run_campaign(const SimConfig& config);

// Every pattern literally; BudgetExceededError past kPatternBudget.
SimReport run_exhaustive_literal(const SimConfig& config);

std::string render_report(const SimReport& report);

struct ClaimBounds {
  std::optional<Rational> achievable;  // empty unless T | (N-f-1)
  std::optional<BoundValue> delay_lb;  // empty when T = 1
  BoundValue erasure_lb;
};

ClaimBounds claim_bounds(const SimConfig& config);

}  // namespace mvc

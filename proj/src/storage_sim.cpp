#include "mvc/storage_sim.hpp"

#include "mvc/allocation.hpp"
#include "mvc/errors.hpp"
#include "mvc/field_math.hpp"
#include "mvc/mvc_codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

namespace mvc {

using json = nlohmann::ordered_json;

std::string to_string(Channel c) { return c == Channel::delay ? "delay" : "erasure"; }

std::string to_string(PatternMode m) {
  switch (m) {
    case PatternMode::exhaustive: return "exhaustive";
    case PatternMode::random: return "random";
    case PatternMode::explicit_trace: return "explicit";
  }
  return "?";
}

std::string to_string(Scheme s) { return s == Scheme::construction ? "construction" : "replication"; }

Channel parse_channel(const std::string& s) {
  if (s == "delay") return Channel::delay;
  if (s == "erasure") return Channel::erasure;
  throw PreconditionError("unknown channel '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "construction") return Scheme::construction;
  if (s == "replication") return Scheme::replication;
  throw PreconditionError("unknown storage scheme '" + s + "'");
}

void SimConfig::validate() const {
  if (n < 2 || n > 16) throw PreconditionError("N must be in [2, 16]");
  if (f < 1 || f >= n) throw PreconditionError("f must satisfy 1 <= f < N");
  if (t < 1 || t > kMaxVersions) throw PreconditionError("T must be in [1, 16]");
  if (horizon < t || horizon > 30) throw PreconditionError("horizon must be in [T, 30]");
  if (logm_bits < 1 || logm_bits > 64) throw PreconditionError("simulated payloads must be 1 to 64 bits");
  if (random_patterns < 1) throw PreconditionError("need at least one random pattern");
}

namespace {

// (N-f)-subsets as bitmasks, lexicographic in their member lists.
std::vector<std::uint32_t> quorum_subsets(int n, int c) {
  std::vector<std::uint32_t> out;
  std::vector<int> pick(c);
  for (int i = 0; i < c; ++i) pick[i] = i;
  while (true) {
    std::uint32_t mask = 0;
    for (int i : pick) mask |= 1u << i;
    out.push_back(mask);
    int i = c - 1;
    while (i >= 0 && pick[i] == n - c + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < c; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<int> members(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if ((mask >> i) & 1u) out.push_back(i);
  return out;
}

// Bit v of a received mask is version v; version 0 is always present.
std::uint32_t received_mask(const ArrivalPattern& p, int m, int slot) {
  std::uint32_t mask = 1;
  if (p.channel == Channel::delay) {
    const auto& d = p.delay[m];
    for (int v = 1; v <= static_cast<int>(d.size()); ++v)
      if (v + d[v - 1] <= slot) mask |= 1u << v;
  } else {
    const auto& got = p.delivered[m];
    for (int v = 1; v <= std::min<int>(slot, static_cast<int>(got.size())); ++v)
      if (got[v - 1]) mask |= 1u << v;
  }
  return mask;
}

int latest_of(std::uint32_t mask) { return 31 - std::countl_zero(mask); }

bool window_reaches(const ArrivalPattern& p, std::uint32_t subset, int first, int last) {
  for (int v = first; v <= last; ++v) {
    bool all = true;
    for (int m : members(subset)) all = all && p.delivered[m][v - 1];
    if (all) return true;
  }
  return false;
}

}  // namespace

std::optional<std::string> check_pattern(const SimConfig& config, const ArrivalPattern& pattern) {
  config.validate();
  if (pattern.channel != config.channel) return "pattern is for the " + to_string(pattern.channel) + " channel";
  const auto& rows = pattern.channel == Channel::delay ? pattern.delay.size() : pattern.delivered.size();
  if (static_cast<int>(rows) != config.n) return "pattern has " + std::to_string(rows) + " server rows";
  for (int m = 0; m < config.n; ++m) {
    const std::size_t len =
        pattern.channel == Channel::delay ? pattern.delay[m].size() : pattern.delivered[m].size();
    if (static_cast<int>(len) != config.horizon) {
      return "server " + std::to_string(m + 1) + " row has " + std::to_string(len) + " versions";
    }
  }
  if (pattern.channel == Channel::delay) {
    for (int m = 0; m < config.n; ++m)
      for (int v = 1; v <= config.horizon; ++v) {
        const int d = pattern.delay[m][v - 1];
        if (d < 0 || d > config.t - 1) {
          return "delay " + std::to_string(d) + " of version " + std::to_string(v) + " at server " +
                 std::to_string(m + 1) + " is outside [0, T-1]";
        }
      }
    return std::nullopt;
  }
  for (std::uint32_t subset : quorum_subsets(config.n, config.quorum())) {
    for (int first = 1; first + config.t - 1 <= config.horizon; ++first) {
      if (!window_reaches(pattern, subset, first, first + config.t - 1)) {
        return "no packet in [" + std::to_string(first) + ", " + std::to_string(first + config.t - 1) +
               "] reaches all of " + subset_to_string(subset);
      }
    }
  }
  return std::nullopt;
}

long double exhaustive_pattern_count(const SimConfig& config) {
  const long double base = config.channel == Channel::delay ? config.t : 2;
  return std::pow(base, static_cast<long double>(config.n) * config.horizon);
}

ArrivalPattern random_pattern(const SimConfig& config, std::mt19937_64& rng) {
  config.validate();
  ArrivalPattern p;
  p.channel = config.channel;
  if (config.channel == Channel::delay) {
    p.delay.assign(config.n, std::vector<int>(config.horizon));
    for (auto& row : p.delay)
      for (auto& d : row) d = static_cast<int>(rng() % static_cast<std::uint64_t>(config.t));
    return p;
  }
  p.delivered.assign(config.n, std::vector<bool>(config.horizon));
  for (auto& row : p.delivered)
    for (std::size_t v = 0; v < row.size(); ++v) row[v] = (rng() & 1u) != 0;
  for (std::uint32_t subset : quorum_subsets(config.n, config.quorum())) {
    for (int first = 1; first + config.t - 1 <= config.horizon; ++first) {
      if (window_reaches(p, subset, first, first + config.t - 1)) continue;
      const int v = first + static_cast<int>(rng() % static_cast<std::uint64_t>(config.t));
      for (int m : members(subset)) p.delivered[m][v - 1] = true;
    }
  }
  if (auto why = check_pattern(config, p)) throw ContractError("repaired erasure pattern is invalid: " + *why);
  return p;
}

std::string render_pattern_json(const ArrivalPattern& pattern) {
  json j;
  j["channel"] = to_string(pattern.channel);
  if (pattern.channel == Channel::delay) {
    j["delay"] = pattern.delay;
  } else {
    json rows = json::array();
    for (const auto& row : pattern.delivered) {
      json r = json::array();
      for (bool b : row) r.push_back(b ? 1 : 0);
      rows.push_back(r);
    }
    j["delivered"] = rows;
  }
  return j.dump();
}

ArrivalPattern parse_pattern_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("pattern is not valid JSON: ") + e.what());
  }
  try {
    ArrivalPattern p;
    p.channel = parse_channel(j.at("channel").get<std::string>());
    if (p.channel == Channel::delay) {
      p.delay = j.at("delay").get<std::vector<std::vector<int>>>();
    } else {
      for (const auto& row : j.at("delivered")) {
        std::vector<bool> r;
        for (const auto& x : row) r.push_back(x.get<int>() != 0);
        p.delivered.push_back(std::move(r));
      }
    }
    return p;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed pattern: ") + e.what());
  }
}

StorageLayout storage_layout(const SimConfig& config, Scheme scheme) {
  config.validate();
  const int c = config.quorum();
  StorageLayout layout;
  if (scheme == Scheme::construction) {
    if ((c - 1) % config.t != 0) {
      throw ConfigurationError("unsupported parameters: T=" + std::to_string(config.t) +
                               " does not divide N-f-1=" + std::to_string(c - 1));
    }
    const AllocationTable table = build_construction_table(c, config.t);
    const auto length = derive_chunk_length(table);
    std::optional<Rational> share;
    for (VersionSet s : table.states()) {
      for (int v : s.members()) {
        const Rational& a = table.at(s, v);
        if (v != s.latest() && a != 0) throw ConfigurationError("construction table keeps more than the latest version");
        if (v == s.latest()) {
          if (share && *share != a) throw ConfigurationError("latest-version shares differ across states");
          share = a;
        }
      }
    }
    layout.length = static_cast<int>(length);
    layout.count = static_cast<int>(numerator_of(*share * length));
  }
  const int points = config.n * layout.length;
  int best_w = 0, best_s = 0;
  for (int w = 2; w <= 8; ++w) {
    if ((1 << w) < points) continue;
    const int s = static_cast<int>(ceil_div(std::int64_t{config.logm_bits}, std::int64_t{layout.length} * w));
    if (best_w == 0 || s * w <= best_s * best_w) {
      best_w = w;
      best_s = s;
    }
  }
  if (best_w == 0) throw ConfigurationError("N*L exceeds GF(256)");
  layout.width = best_w;
  layout.stripes = best_s;
  layout.tag_bits = static_cast<int>(std::ceil(std::log2(2.0 * config.t) - 1e-12));
  if (layout.tag_bits == 0) layout.tag_bits = 1;
  return layout;
}

std::string subset_to_string(std::uint32_t subset) {
  std::string out = "{";
  bool first = true;
  for (int m : members(subset)) {
    out += (first ? "" : ",") + std::to_string(m + 1);
    first = false;
  }
  return out + "}";
}

namespace {

class Engine {
 public:
  Engine(const SimConfig& config, StorageLayout layout)
      : config_(config), layout_(layout), field_(GaloisField::standard(layout.width)) {}

  void set_values(std::mt19937_64& rng) {
    values_.assign(config_.horizon + 1, 0);
    const std::uint64_t mask =
        config_.logm_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << config_.logm_bits) - 1;
    for (auto& v : values_) v = rng() & mask;
    cache_.assign(static_cast<std::size_t>(config_.n) * (config_.horizon + 1), {});
  }

  // chunk symbols of version v held by server m, stripe-major
  const std::vector<FieldElement>& stored(int m, int v) {
    auto& slot = cache_[static_cast<std::size_t>(m) * (config_.horizon + 1) + v];
    if (!slot.empty()) return slot;
    for (int s = 0; s < layout_.stripes; ++s) {
      const Message coefs = stripe(values_[v], s);
      const auto chunk = encode_chunk(coefs, m, layout_.count, layout_.length, field_);
      slot.insert(slot.end(), chunk.values.begin(), chunk.values.end());
    }
    return slot;
  }

  int stored_bits(int m, int v) {
    return static_cast<int>(stored(m, v).size()) * layout_.width + layout_.tag_bits;
  }

  ReadRecord read(int slot, std::uint32_t subset, const std::vector<std::uint32_t>& masks, int& bits_read) {
    ReadRecord r;
    r.slot = slot;
    r.subset = subset;
    std::uint32_t common = ~0u;
    for (int m : members(subset)) common &= masks[m];
    r.latest_common = latest_of(common);
    if (slot >= config_.t && r.latest_common < slot - config_.t + 1) {
      throw ContractError("servers " + subset_to_string(subset) + " share no version newer than " +
                          std::to_string(r.latest_common) + " at slot " + std::to_string(slot));
    }

    const int window = 2 * config_.t;
    std::map<int, std::vector<int>, std::greater<>> by_version;
    bits_read = 0;
    for (int m : members(subset)) {
      const int latest = latest_of(masks[m]);
      bits_read += stored_bits(m, latest);
      const int tag = latest % window;
      const int resolved = slot - (((slot - tag) % window) + window) % window;
      if (resolved >= 0) by_version[resolved].push_back(m);
    }
    for (const auto& [v, servers] : by_version) {
      if (static_cast<int>(servers.size()) * layout_.count < layout_.length) continue;
      std::uint64_t value = 0;
      for (int s = 0; s < layout_.stripes; ++s) {
        EvalCodeword cw;
        for (int m : servers) {
          const int latest = latest_of(masks[m]);
          const auto& sym = stored(m, latest);
          for (int k = 0; k < layout_.count; ++k) {
            cw.point_ids.push_back(static_cast<FieldElement>(m * layout_.length + k));
            cw.values.push_back(sym[static_cast<std::size_t>(s) * layout_.count + k]);
          }
        }
        value |= unstripe(interpolate(cw, layout_.length, field_), s);
      }
      r.decoded = v;
      r.ok = v >= r.latest_common && v <= config_.horizon && value == values_[v];
      return r;
    }
    throw ContractError("no version is decodable from " + subset_to_string(subset) + " at slot " +
                        std::to_string(slot));
  }

  const StorageLayout& layout() const { return layout_; }

 private:
  Message stripe(std::uint64_t value, int s) const {
    Message coefs(layout_.length);
    for (int k = 0; k < layout_.length; ++k) {
      const int shift = (s * layout_.length + k) * layout_.width;
      coefs[k] = shift >= 64 ? 0 : static_cast<FieldElement>((value >> shift) & ((1u << layout_.width) - 1));
    }
    return coefs;
  }

  std::uint64_t unstripe(const std::vector<FieldElement>& coefs, int s) const {
    std::uint64_t value = 0;
    for (int k = 0; k < layout_.length; ++k) {
      const int shift = (s * layout_.length + k) * layout_.width;
      if (shift < 64) value |= static_cast<std::uint64_t>(coefs[k]) << shift;
    }
    return value;
  }

  const SimConfig& config_;
  StorageLayout layout_;
  const GaloisField& field_;
  std::vector<std::uint64_t> values_;
  std::vector<std::vector<FieldElement>> cache_;
};

class Collector {
 public:
  explicit Collector(SimReport& report) : report_(report) {}

  void add(const ReadRecord& r) {
    ++report_.reads_total;
    if (r.decoded >= 0) ++report_.staleness[r.slot - r.decoded];
    if (!r.ok) {
      ++report_.failures;
      if (!report_.first_failure) {
        std::ostringstream out;
        out << "slot " << r.slot << " servers " << subset_to_string(r.subset) << " decoded " << r.decoded
            << " with latest common " << r.latest_common;
        report_.first_failure = out.str();
      }
    }
    records_.insert(r);
  }

  void finish() { report_.reads.assign(records_.begin(), records_.end()); }

 private:
  SimReport& report_;
  std::set<ReadRecord> records_;
};

SimReport empty_report(const SimConfig& config) {
  SimReport report;
  report.scheme = config.scheme;
  report.layout = storage_layout(config, config.scheme);
  return report;
}

void simulate_one(const SimConfig& config, const ArrivalPattern& pattern, Engine& engine, Collector& collect,
                  SimReport& report, bool every_subset, std::mt19937_64* subset_rng, std::ostream* trace) {
  const auto subsets = quorum_subsets(config.n, config.quorum());
  std::vector<std::uint32_t> masks(config.n, 1);
  for (int slot = 1; slot <= config.horizon; ++slot) {
    for (int m = 0; m < config.n; ++m) {
      const std::uint32_t next = received_mask(pattern, m, slot);
      const int bits = engine.stored_bits(m, latest_of(next));
      report.max_storage_bits = std::max(report.max_storage_bits, bits);
      if (trace) {
        for (int v = 1; v <= config.horizon; ++v) {
          if (((next >> v) & 1u) && !((masks[m] >> v) & 1u)) {
            json line;
            line["slot"] = slot;
            line["kind"] = "arrive";
            line["server"] = m + 1;
            line["version"] = v;
            line["decoded"] = nullptr;
            line["bits"] = bits;
            *trace << line.dump() << '\n';
          }
        }
      }
      masks[m] = next;
    }
    std::vector<std::uint32_t> chosen;
    if (every_subset) {
      chosen = subsets;
    } else {
      chosen.push_back(subsets[(*subset_rng)() % subsets.size()]);
    }
    for (std::uint32_t subset : chosen) {
      int bits_read = 0;
      const ReadRecord r = engine.read(slot, subset, masks, bits_read);
      collect.add(r);
      if (trace) {
        json line;
        line["slot"] = slot;
        line["kind"] = "read";
        json members_1 = json::array();
        for (int m : members(subset)) members_1.push_back(m + 1);
        line["subset"] = members_1;
        line["version"] = r.latest_common;
        line["decoded"] = r.decoded;
        line["bits"] = bits_read;
        *trace << line.dump() << '\n';
      }
    }
  }
}

void require_valid(const SimConfig& config, const ArrivalPattern& pattern) {
  if (auto why = check_pattern(config, pattern)) throw PreconditionError("invalid arrival pattern: " + *why);
}

// every pattern of the channel, odometer over (server, version) with server 0 most significant
template <class F>
void for_each_literal_pattern(const SimConfig& config, F&& visit) {
  const long double total = exhaustive_pattern_count(config);
  if (total > kPatternBudget) {
    throw BudgetExceededError("exhaustive run needs " + std::to_string(static_cast<double>(total)) +
                                  " patterns; the limit is " + std::to_string(static_cast<long>(kPatternBudget)),
                              static_cast<double>(total));
  }
  const int base = config.channel == Channel::delay ? config.t : 2;
  const int cells = config.n * config.horizon;
  std::vector<int> digit(cells, 0);
  ArrivalPattern p;
  p.channel = config.channel;
  while (true) {
    if (config.channel == Channel::delay) {
      p.delay.assign(config.n, std::vector<int>(config.horizon));
      for (int i = 0; i < cells; ++i) p.delay[i / config.horizon][i % config.horizon] = digit[i];
    } else {
      p.delivered.assign(config.n, std::vector<bool>(config.horizon));
      for (int i = 0; i < cells; ++i) p.delivered[i / config.horizon][i % config.horizon] = digit[i] != 0;
    }
    visit(p);
    int i = cells - 1;
    while (i >= 0 && digit[i] == base - 1) digit[i--] = 0;
    if (i < 0) break;
    ++digit[i];
  }
}

SimReport factorized_delay(const SimConfig& config) {
  SimReport report = empty_report(config);
  Engine engine(config, report.layout);
  std::mt19937_64 rng(config.seed);
  engine.set_values(rng);
  Collector collect(report);
  const long double total = exhaustive_pattern_count(config);
  report.patterns = total >= 1.8e19L ? ~std::uint64_t{0} : static_cast<std::uint64_t>(total);

  const auto subsets = quorum_subsets(config.n, config.quorum());
  for (int slot = 1; slot <= config.horizon; ++slot) {
    // a server's received set at `slot` depends only on the delays of versions 1..slot
    std::set<std::uint32_t> reachable;
    std::vector<int> d(slot, 0);
    while (true) {
      std::uint32_t mask = 1;
      for (int v = 1; v <= slot; ++v)
        if (v + d[v - 1] <= slot) mask |= 1u << v;
      reachable.insert(mask);
      int i = slot - 1;
      while (i >= 0 && d[i] == config.t - 1) d[i--] = 0;
      if (i < 0) break;
      ++d[i];
    }
    const std::vector<std::uint32_t> options(reachable.begin(), reachable.end());
    for (std::uint32_t mask : options)
      for (int m = 0; m < config.n; ++m)
        report.max_storage_bits = std::max(report.max_storage_bits, engine.stored_bits(m, latest_of(mask)));

    for (std::uint32_t subset : subsets) {
      const auto servers = members(subset);
      std::vector<std::size_t> pick(servers.size(), 0);
      std::vector<std::uint32_t> masks(config.n, 1);
      while (true) {
        for (std::size_t k = 0; k < servers.size(); ++k) masks[servers[k]] = options[pick[k]];
        int bits_read = 0;
        collect.add(engine.read(slot, subset, masks, bits_read));
        int k = static_cast<int>(servers.size()) - 1;
        while (k >= 0 && pick[k] == options.size() - 1) pick[k--] = 0;
        if (k < 0) break;
        ++pick[k];
      }
    }
  }
  collect.finish();
  return report;
}

}  // namespace

SimReport run_simulation(const SimConfig& config, const ArrivalPattern& pattern, bool every_subset,
                         std::uint64_t subset_seed, std::ostream* trace) {
  require_valid(config, pattern);
  SimReport report = empty_report(config);
  Engine engine(config, report.layout);
  std::mt19937_64 rng(config.seed);
  engine.set_values(rng);
  std::mt19937_64 subset_rng(subset_seed);
  Collector collect(report);
  report.patterns = 1;
  simulate_one(config, pattern, engine, collect, report, every_subset, &subset_rng, trace);
  collect.finish();
  return report;
}

SimReport run_exhaustive_literal(const SimConfig& config) {
  config.validate();
  SimReport report = empty_report(config);
  Engine engine(config, report.layout);
  std::mt19937_64 rng(config.seed);
  engine.set_values(rng);
  Collector collect(report);
  for_each_literal_pattern(config, [&](const ArrivalPattern& p) {
    if (check_pattern(config, p)) return;
    ++report.patterns;
    simulate_one(config, p, engine, collect, report, true, nullptr, nullptr);
  });
  collect.finish();
  return report;
}

SimReport run_campaign(const SimConfig& config) {
  config.validate();
  if (config.mode == PatternMode::exhaustive) {
    if (config.channel == Channel::delay) return factorized_delay(config);
    return run_exhaustive_literal(config);
  }
  if (config.mode != PatternMode::random) throw PreconditionError("explicit patterns run through run_simulation");
  SimReport report = empty_report(config);
  Engine engine(config, report.layout);
  Collector collect(report);
  std::mt19937_64 rng(config.seed);
  for (int i = 0; i < config.random_patterns; ++i) {
    engine.set_values(rng);
    const ArrivalPattern p = random_pattern(config, rng);
    ++report.patterns;
    simulate_one(config, p, engine, collect, report, false, &rng, nullptr);
  }
  collect.finish();
  return report;
}

std::string render_report(const SimReport& report) {
  std::ostringstream out;
  const auto& l = report.layout;
  out << "scheme=" << to_string(report.scheme) << " L=" << l.length << " count=" << l.count << " w=" << l.width
      << " stripes=" << l.stripes << " tag_bits=" << l.tag_bits << '\n';
  out << "max_storage_bits=" << report.max_storage_bits << " patterns=" << report.patterns
      << " reads=" << report.reads_total << " failures=" << report.failures
      << " distinct_reads=" << report.reads.size() << '\n';
  out << "staleness:";
  for (const auto& [lag, n] : report.staleness) out << ' ' << lag << '=' << n;
  out << '\n';
  if (report.first_failure) out << "first_failure: " << *report.first_failure << '\n';
  for (const auto& r : report.reads) {
    out << "read slot=" << r.slot << " servers=" << subset_to_string(r.subset) << " common=" << r.latest_common
        << " decoded=" << r.decoded << (r.ok ? " ok" : " FAIL") << '\n';
  }
  return out.str();
}

ClaimBounds claim_bounds(const SimConfig& config) {
  if (config.n < 2 || config.f < 1 || config.f >= config.n) throw PreconditionError("f must satisfy 1 <= f < N");
  if (config.t < 1) throw PreconditionError("T must be positive");
  const int c = config.quorum();
  ClaimBounds b{std::nullopt, std::nullopt, general_bound(c, config.t, config.logm_bits)};
  if ((c - 1) % config.t == 0) b.achievable = Rational(config.t, config.t + c - 1);
  if (config.t >= 2) b.delay_lb = general_bound(c, config.t - 1, config.logm_bits);
  return b;
}

}  // namespace mvc

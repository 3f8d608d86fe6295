#include "mvc/converse_lab.hpp"

#include "mvc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace mvc {

// ---- bounds -------------------------------------------------------------

long double log2_int(const BigInt& x) {
  if (x <= 0) throw DomainError("log2 of a nonpositive integer");
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 62) return std::log2(x.convert_to<long double>());
  const std::size_t shift = bits - 62;
  const BigInt top = x >> shift;
  // the dropped low bits change the result by less than 2^-61 relative
  return std::log2(top.convert_to<long double>()) + static_cast<long double>(shift);
}

namespace {

BigInt binomial_big(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_bound_params(int c, int nu, int logm_bits) {
  if (c < 1 || nu < 1) throw PreconditionError("c and nu must be positive");
  if (logm_bits < 1) throw PreconditionError("logM must be at least one bit");
  // M >= nu
  if (nu > 1 && static_cast<long double>(logm_bits) < std::log2(static_cast<long double>(nu))) {
    throw PreconditionError("logM must be at least log2(nu)");
  }
}

}  // namespace

BoundValue general_bound(int c, int nu, int logm_bits) {
  check_bound_params(c, nu, logm_bits);
  const int span = c + nu - 1;
  BigInt power = 1;
  for (int i = 0; i < nu; ++i) power *= nu;
  const BigInt count = power * binomial_big(span, nu);
  BoundValue b;
  b.leading = Rational(nu, span);
  b.penalty = log2_int(count) / (static_cast<long double>(span) * logm_bits);
  return b;
}

BoundValue theorem2_bound(int c, int nu, int logm_bits) {
  if (nu != 2) return general_bound(c, nu, logm_bits);
  check_bound_params(c, nu, logm_bits);
  BoundValue b;
  b.leading = Rational(2, c + 1);
  b.penalty = log2_int(BigInt(c)) / (static_cast<long double>(c + 1) * logm_bits);
  return b;
}

// ---- shared helpers -----------------------------------------------------

namespace {

int first_c(const AbstractCode& code) {
  if (code.quorum() > code.n_servers()) throw PreconditionError("quorum exceeds server count");
  return code.quorum();
}

std::vector<Message> held_values(VersionSet state, const std::map<int, Message>& values) {
  std::vector<Message> held;
  for (int v : state.members()) {
    auto it = values.find(v);
    if (it == values.end()) throw PreconditionError("value of version " + std::to_string(v) + " is unknown");
    held.push_back(it->second);
  }
  return held;
}

std::map<int, Message> as_map(std::span<const Message> w) {
  std::map<int, Message> out;
  for (std::size_t i = 0; i < w.size(); ++i) out.emplace(static_cast<int>(i) + 1, w[i]);
  return out;
}

void check_tuple(const AbstractCode& code, std::span<const Message> w, bool distinct) {
  if (static_cast<int>(w.size()) != code.n_versions()) throw PreconditionError("need one value per version");
  for (const auto& m : w)
    if (m.size() != code.message_length()) throw PreconditionError("message length differs from the code's");
  if (!distinct) return;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[i] == w[j]) throw PreconditionError("values must be pairwise distinct");
}

std::string render_states(std::span<const VersionSet> states) {
  std::string out = "(";
  for (std::size_t i = 0; i < states.size(); ++i) out += (i ? "," : "") + states[i].to_string();
  return out + ")";
}

// Decode contract on a fully known input: Null iff disjoint, otherwise a
// value W_v with v at or after the latest common version.
void check_decoder_output(std::span<const VersionSet> states, const std::optional<Message>& out,
                          std::span<const Message> w) {
  std::vector<VersionSet> all(states.begin(), states.end());
  const int m = latest_common_version(all);
  if (m == 0) {
    if (out) throw ContractError("decoder returned a value for disjoint states " + render_states(states));
    return;
  }
  if (!out) throw ContractError("decoder returned Null for states " + render_states(states));
  int version = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == *out) version = static_cast<int>(i) + 1;
  if (version == 0) {
    throw ContractError("decoder output is none of the encoded values at states " + render_states(states));
  }
  if (version < m) {
    throw ContractError("decoder returned version " + std::to_string(version) + " below the latest common version " +
                        std::to_string(m) + " at states " + render_states(states));
  }
}

struct ChiInput {
  std::vector<VersionSet> prefix_states;
  std::vector<Symbol> prefix_symbols;
  VersionSet t;
  std::map<int, Message> values;  // at least every version of t
  std::span<const Message> full_w;  // nonempty enables contract checks
};

MessageSet evaluate_chi(const AbstractCode& code, const ChiInput& in) {
  const int c = first_c(code);
  const int l = static_cast<int>(in.prefix_states.size());
  if (l < 1 || l > c) throw PreconditionError("chi needs 1 <= l <= c fixed states");
  const int free_servers = c - l;
  const auto choices = static_cast<std::uint64_t>(1) << in.t.size();
  long double total = 1;
  for (int k = 0; k < free_servers; ++k) total *= static_cast<long double>(choices);
  if (total > static_cast<long double>(kDecodableSetBudget)) {
    throw BudgetExceededError("decodable set needs " + std::to_string(static_cast<std::uint64_t>(total)) +
                                  " decoder calls; the limit is " + std::to_string(kDecodableSetBudget),
                              static_cast<double>(total));
  }

  std::vector<VersionSet> subsets;
  for (VersionSet s : all_subsets(code.n_versions()))
    if (s.subset_of(in.t)) subsets.push_back(s);

  // encoded[k][idx]: server l+k in state subsets[idx]
  std::vector<std::vector<Symbol>> encoded(free_servers, std::vector<Symbol>(subsets.size()));
  for (int k = 0; k < free_servers; ++k)
    for (std::size_t idx = 0; idx < subsets.size(); ++idx)
      encoded[k][idx] = code.encode(l + k, subsets[idx], held_values(subsets[idx], in.values));

  std::vector<int> servers(c);
  std::iota(servers.begin(), servers.end(), 0);
  std::vector<VersionSet> states(in.prefix_states);
  std::vector<Symbol> symbols(in.prefix_symbols);
  states.resize(c);
  symbols.resize(c);
  std::vector<std::size_t> digit(free_servers, 0);
  MessageSet out;
  while (true) {
    for (int k = 0; k < free_servers; ++k) {
      states[l + k] = subsets[digit[k]];
      symbols[l + k] = encoded[k][digit[k]];
    }
    auto value = code.decode(servers, states, symbols);
    if (!in.full_w.empty()) check_decoder_output(states, value, in.full_w);
    if (value) out.insert(std::move(*value));
    int k = free_servers - 1;
    while (k >= 0 && digit[k] == subsets.size() - 1) digit[k--] = 0;
    if (k < 0) break;
    ++digit[k];
  }
  return out;
}

}  // namespace

// ---- nu = 2 state pair ------------------------------------------------

StatePair find_state_pair_nu2(const AbstractCode& code, std::span<const Message> w) {
  if (code.n_versions() != 2) throw PreconditionError("state pair construction needs nu = 2");
  check_tuple(code, w, false);
  const int n = code.n_servers();
  const int c = first_c(code);
  const VersionSet both{1, 2};
  const VersionSet first{1};

  auto state_with = [&](int x) {
    SystemState s(n);
    for (int i = 0; i < c; ++i) s[i] = i < x ? both : first;
    return s;
  };
  auto decode_first_c = [&](const SystemState& s) {
    std::vector<int> servers(c);
    std::vector<VersionSet> states(c);
    std::vector<Symbol> symbols(c);
    const auto values = as_map(w);
    for (int i = 0; i < c; ++i) {
      servers[i] = i;
      states[i] = s[i];
      symbols[i] = code.encode(i, s[i], held_values(s[i], values));
    }
    return code.decode(servers, states, symbols);
  };

  if (w[0] == w[1]) return StatePair{state_with(0), state_with(1), 1};

  for (int x = 0; x <= c; ++x) {
    SystemState s2 = state_with(x);
    if (decode_first_c(s2) != w[1]) continue;
    if (x == 0) throw ContractError("all servers in state {1} decoded Version 2");
    SystemState s1 = state_with(x - 1);
    if (decode_first_c(s1) != w[0]) {
      throw ContractError("state with " + std::to_string(x - 1) + " servers in {1,2} does not decode Version 1");
    }
    return StatePair{std::move(s1), std::move(s2), x};
  }
  throw ContractError("no state of the family decodes Version 2");
}

// ---- decodable set ----------------------------------------------------

MessageSet decodable_set(const AbstractCode& code, std::span<const VersionSet> states, VersionSet t,
                         std::span<const Message> w) {
  check_tuple(code, w, false);
  if (!t.subset_of(VersionSet::full(code.n_versions()))) throw PreconditionError("T outside [nu]");
  ChiInput in;
  in.values = as_map(w);
  in.t = t;
  in.prefix_states.assign(states.begin(), states.end());
  for (std::size_t i = 0; i < states.size(); ++i) {
    in.prefix_symbols.push_back(code.encode(static_cast<int>(i), states[i], held_values(states[i], in.values)));
  }
  MessageSet out = evaluate_chi(code, in);
  for (const auto& value : out) {
    if (std::find(w.begin(), w.end(), value) == w.end()) {
      throw ContractError("decodable set holds a value that was never encoded");
    }
  }
  return out;
}

// ---- AuxVars ----------------------------------------------------------

const Symbol& aux_init_symbol() {
  static const Symbol one{0x01};
  return one;
}

std::string render_aux(const AuxTuple& aux) {
  auto hex = [](const Symbol& s) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (auto b : s) {
      out += digits[b >> 4];
      out += digits[b & 15];
    }
    return out;
  };
  std::ostringstream out;
  out << "Y=[";
  for (std::size_t i = 0; i < aux.y.size(); ++i) out << (i ? "," : "") << hex(aux.y[i]);
  out << "] Z=[";
  for (std::size_t i = 0; i < aux.z.size(); ++i) out << (i ? "," : "") << hex(aux.z[i]);
  out << "] A=[";
  for (std::size_t i = 0; i < aux.a.size(); ++i) out << (i ? "," : "") << aux.a[i];
  out << "] Pi=[";
  for (std::size_t i = 0; i < aux.pi.size(); ++i) out << (i ? "," : "") << aux.pi[i];
  out << "]";
  return out.str();
}

std::vector<VersionSet> reconstruct_states(int nu, const std::vector<int>& a, const std::vector<int>& pi,
                                           int ver_count, int serv_count) {
  const VersionSet full = VersionSet::full(nu);
  std::vector<VersionSet> states(serv_count);
  for (int i = 1; i <= serv_count; ++i) {
    VersionSet s = full;
    for (int x = 1; x <= ver_count - 1; ++x)
      if (a[x - 1] <= i) s = s.without(pi[x - 1]);
    states[i - 1] = s;
  }
  return states;
}

AuxTuple aux_vars(const AbstractCode& code, std::span<const Message> w) {
  check_tuple(code, w, true);
  const int c = first_c(code);
  const int nu = code.n_versions();
  const VersionSet full = VersionSet::full(nu);
  const auto values = as_map(w);

  int ver_count = 1;
  int serv_count = 1;
  VersionSet encountered;
  std::vector<Symbol> y(c, aux_init_symbol());
  std::vector<Symbol> z(nu, aux_init_symbol());
  std::vector<int> a(nu, 1);
  std::vector<int> pi(nu, 0);
  std::vector<VersionSet> states(c);
  std::vector<Symbol> symbols(c);
  // states of servers 1..k at the last iteration with ServCount = k
  std::vector<std::vector<VersionSet>> snapshot(c + 1);
  std::vector<std::string> trace;

  auto fail = [&](const std::string& what) -> ContractError {
    std::string msg = what + "; trace:";
    for (const auto& line : trace) msg += "\n  " + line;
    return ContractError(msg);
  };

  while (ver_count <= nu && serv_count <= c) {
    states[serv_count - 1] = full - encountered;
    const VersionSet t = full - encountered;
    symbols[serv_count - 1] =
        code.encode(serv_count - 1, states[serv_count - 1], held_values(states[serv_count - 1], values));

    const std::vector<VersionSet> prefix(states.begin(), states.begin() + serv_count);
    if (prefix != reconstruct_states(nu, a, pi, ver_count, serv_count)) {
      throw fail("server states differ from their reconstruction from A and Pi");
    }
    snapshot[serv_count] = prefix;

    ChiInput in;
    in.prefix_states = prefix;
    in.prefix_symbols.assign(symbols.begin(), symbols.begin() + serv_count);
    in.values = values;
    in.full_w = w;

    std::vector<Message> u_set;
    std::ostringstream line;
    line << "VerCount=" << ver_count << " ServCount=" << serv_count << " T=" << t.to_string() << " U={";
    for (int u : t.members()) {
      in.t = t.without(u);
      MessageSet chi;
      try {
        chi = evaluate_chi(code, in);
      } catch (const ContractError& e) {
        trace.push_back(line.str() + "...}");
        throw fail(e.what());
      }
      for (const auto& value : chi) {
        const auto pos = std::find(w.begin(), w.end(), value);
        if (pos == w.end()) throw fail("decodable set holds a value that was never encoded");
        if (!t.contains(static_cast<int>(pos - w.begin()) + 1)) {
          throw fail("decodable set for u=" + std::to_string(u) + " holds an already encountered version");
        }
      }
      if (chi.contains(w[u - 1])) {
        u_set.push_back(w[u - 1]);
        line << (u_set.size() > 1 ? "," : "") << "W" << u;
      }
    }
    line << "}";
    trace.push_back(line.str());

    if (!u_set.empty()) {
      const Message& best = *std::max_element(u_set.begin(), u_set.end());
      const int v = static_cast<int>(std::find(w.begin(), w.end(), best) - w.begin()) + 1;
      a[ver_count - 1] = serv_count;
      z[ver_count - 1] = symbols[serv_count - 1];
      pi[ver_count - 1] = v;
      encountered = encountered.with(v);
      ++ver_count;
    } else {
      y[serv_count - 1] = symbols[serv_count - 1];
      ++serv_count;
    }
  }

  if (ver_count != nu + 1) {
    throw fail("loop ended with VerCount=" + std::to_string(ver_count) +
               " before every version was found; the fallback permutation would be used");
  }
  std::vector<int> sorted_pi(pi);
  std::sort(sorted_pi.begin(), sorted_pi.end());
  for (int i = 0; i < nu; ++i)
    if (sorted_pi[i] != i + 1) throw fail("Pi is not a permutation");
  for (int i = 0; i < nu; ++i) {
    if (a[i] < 1 || a[i] > c || (i > 0 && a[i] < a[i - 1])) throw fail("A is not nondecreasing within [1, c]");
  }
  for (int t = 1; t <= nu; ++t) {
    if (a[t - 1] <= 1) continue;
    const int k = a[t - 1] - 1;
    const std::vector<VersionSet> final_prefix(states.begin(), states.begin() + k);
    if (snapshot[k] != final_prefix) throw fail("states before A_" + std::to_string(t) + " changed later");
  }

  y.resize(c - 1);
  return AuxTuple{std::move(y), std::move(z), std::move(a), std::move(pi)};
}

std::vector<Message> invert_aux_vars(const AbstractCode& code, const AuxTuple& aux) {
  const int c = first_c(code);
  const int nu = code.n_versions();
  if (static_cast<int>(aux.y.size()) != c - 1 || static_cast<int>(aux.z.size()) != nu ||
      static_cast<int>(aux.a.size()) != nu || static_cast<int>(aux.pi.size()) != nu) {
    throw PreconditionError("auxiliary tuple has the wrong shape");
  }
  const VersionSet full = VersionSet::full(nu);
  std::map<int, Message> known;
  for (int t = nu; t >= 1; --t) {
    const int at = aux.a[t - 1];
    if (at < 1 || at > c) throw PreconditionError("A out of range");
    VersionSet tset = full;
    for (int x = 1; x < t; ++x) tset = tset.without(aux.pi[x - 1]);
    const int target = aux.pi[t - 1];

    ChiInput in;
    in.prefix_states = reconstruct_states(nu, aux.a, aux.pi, t, at);
    in.prefix_symbols.assign(aux.y.begin(), aux.y.begin() + (at - 1));
    in.prefix_symbols.push_back(aux.z[t - 1]);
    in.t = tset.without(target);
    in.values = known;

    MessageSet chi = evaluate_chi(code, in);
    for (const auto& [v, value] : known) chi.erase(value);
    if (chi.size() != 1) {
      throw ContractError("inversion step for Version " + std::to_string(target) + " left " +
                          std::to_string(chi.size()) + " candidates");
    }
    known.emplace(target, *chi.begin());
  }
  std::vector<Message> w;
  for (int v = 1; v <= nu; ++v) w.push_back(known.at(v));
  return w;
}

// ---- bijection check ------------------------------------------------

BijectionReport bijection_check(const AbstractCode& code, std::uint64_t m) {
  const int nu = code.n_versions();
  const int c = first_c(code);
  BijectionReport report;
  report.code_name = code.name();
  report.c = c;
  report.nu = nu;
  report.m = m;
  if (m < static_cast<std::uint64_t>(nu)) throw PreconditionError("M must be at least nu");
  long double all = 1;
  for (int i = 0; i < nu; ++i) all *= static_cast<long double>(m);
  if (all > static_cast<long double>(kBijectionBudget)) {
    throw BudgetExceededError("M^nu = " + std::to_string(static_cast<std::uint64_t>(all)) + " exceeds " +
                                  std::to_string(kBijectionBudget),
                              static_cast<double>(all));
  }
  const std::size_t length = code.message_length();
  if (length < 8 && m > (std::uint64_t{1} << (8 * length))) {
    throw PreconditionError("M does not fit in the code's message length");
  }
  report.expected_tuples = 1;
  for (int i = 0; i < nu; ++i) report.expected_tuples *= m - static_cast<std::uint64_t>(i);

  std::vector<std::pair<AuxTuple, std::vector<std::uint64_t>>> images;
  std::vector<std::uint64_t> idx(nu, 0);
  bool round_trip = true;
  std::size_t max_symbol = 1;
  while (true) {
    bool distinct = true;
    for (int i = 0; i < nu && distinct; ++i)
      for (int j = i + 1; j < nu && distinct; ++j) distinct = idx[i] != idx[j];
    if (distinct) {
      ++report.tuples;
      std::vector<Message> w;
      for (auto k : idx) w.push_back(message_from_index(k, length));
      std::string label = "W=(";
      for (int i = 0; i < nu; ++i) label += (i ? "," : "") + std::to_string(idx[i]);
      label += ")";
      try {
        AuxTuple aux = aux_vars(code, w);
        for (const auto& s : aux.y) max_symbol = std::max(max_symbol, s.size());
        for (const auto& s : aux.z) max_symbol = std::max(max_symbol, s.size());
        const auto back = invert_aux_vars(code, aux);
        if (back != w && round_trip) {
          round_trip = false;
          if (!report.counterexample) report.counterexample = label + " inverts to a different tuple";
        }
        images.emplace_back(std::move(aux), idx);
      } catch (const ContractError& e) {
        if (!report.contract_error) report.contract_error = label + ": " + e.what();
        round_trip = false;
      }
    }
    int i = nu - 1;
    while (i >= 0 && idx[i] == m - 1) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }

  std::sort(images.begin(), images.end());
  report.injective = true;
  for (std::size_t i = 1; i < images.size(); ++i) {
    if (images[i].first == images[i - 1].first) {
      if (report.injective) {
        std::string a = "W=(", b = "W=(";
        for (int k = 0; k < nu; ++k) {
          a += (k ? "," : "") + std::to_string(images[i - 1].second[k]);
          b += (k ? "," : "") + std::to_string(images[i].second[k]);
        }
        report.counterexample = a + ") and " + b + ") share " + render_aux(images[i].first);
      }
      report.injective = false;
    } else {
      ++report.distinct_images;
    }
  }
  if (!images.empty()) ++report.distinct_images;
  if (report.contract_error) report.injective = report.injective && images.size() == report.tuples;
  report.round_trip = round_trip && images.size() == report.tuples;

  BigInt factorial = 1;
  for (int i = 2; i <= nu; ++i) factorial *= i;
  report.log2_images = report.distinct_images ? std::log2(static_cast<long double>(report.distinct_images)) : 0;
  report.log2_counting_bound = static_cast<long double>(c + nu - 1) * 8.0L * static_cast<long double>(max_symbol) +
                               log2_int(factorial * binomial_big(c + nu - 1, nu));
  report.counting_bound_ok =
      report.tuples == report.expected_tuples && report.log2_images <= report.log2_counting_bound;
  return report;
}

std::string render_report(const BijectionReport& report) {
  std::ostringstream out;
  out << "code=" << report.code_name << " c=" << report.c << " nu=" << report.nu << " M=" << report.m
      << " tuples=" << report.tuples << " expected=" << report.expected_tuples
      << " distinct=" << report.distinct_images << " injective=" << (report.injective ? "true" : "false")
      << " round_trip=" << (report.round_trip ? "true" : "false")
      << " counting_bound=" << (report.counting_bound_ok ? "ok" : "violated");
  if (report.counterexample) out << " counterexample=\"" << *report.counterexample << "\"";
  if (report.contract_error) {
    std::string first_line = *report.contract_error;
    first_line = first_line.substr(0, first_line.find('\n'));
    out << " contract_error=\"" << first_line << "\"";
  }
  return out.str();
}

}  // namespace mvc

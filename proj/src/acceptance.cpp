#include "mvc/acceptance.hpp"

#include "mvc/alloc_optimizer.hpp"
#include "mvc/allocation.hpp"
#include "mvc/code.hpp"
#include "mvc/converse_lab.hpp"
#include "mvc/errors.hpp"
#include "mvc/storage_sim.hpp"
#include "mvc/table_io.hpp"
#include "mvc/verifier.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace mvc::acceptance {

namespace {

using Clock = std::chrono::steady_clock;
using HighFloat = boost::multiprecision::cpp_bin_float_50;

struct Expected {
  VersionSet state;
  int version;
  Rational value;
};

Rational q(int p, int d) { return Rational(p, d); }

CriterionResult titled(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

// Published allocations, one entry per (state, version) with v in state.
std::vector<Expected> published_c2_nu2() {
  return {{VersionSet{1}, 1, q(3, 4)},
          {VersionSet{2}, 2, q(1, 2)},
          {VersionSet{1, 2}, 1, q(1, 4)},
          {VersionSet{1, 2}, 2, q(1, 2)}};
}

std::vector<Expected> published_c7_nu3() {
  const Rational third = q(1, 3);
  return {{VersionSet{1}, 1, third},        {VersionSet{2}, 2, third},        {VersionSet{1, 2}, 1, 0},
          {VersionSet{1, 2}, 2, third},     {VersionSet{3}, 3, third},        {VersionSet{1, 3}, 1, 0},
          {VersionSet{1, 3}, 3, third},     {VersionSet{2, 3}, 2, 0},         {VersionSet{2, 3}, 3, third},
          {VersionSet{1, 2, 3}, 1, 0},      {VersionSet{1, 2, 3}, 2, 0},      {VersionSet{1, 2, 3}, 3, third}};
}

std::vector<Expected> published_c5_nu3() {
  const Rational third = q(1, 3);
  const Rational two = q(2, 15);
  return {{VersionSet{1}, 1, q(7, 15)},     {VersionSet{2}, 2, third},        {VersionSet{1, 2}, 1, two},
          {VersionSet{1, 2}, 2, third},     {VersionSet{3}, 3, third},        {VersionSet{1, 3}, 1, two},
          {VersionSet{1, 3}, 3, third},     {VersionSet{2, 3}, 2, 0},         {VersionSet{2, 3}, 3, third},
          {VersionSet{1, 2, 3}, 1, two},    {VersionSet{1, 2, 3}, 2, 0},      {VersionSet{1, 2, 3}, 3, third}};
}

std::string check_table(int c, int nu, const Rational& alpha, const std::vector<Expected>& expected) {
  const AllocationTable table = build_construction_table(c, nu);
  // the machine-readable rendering must carry the same values
  const AllocationTable reparsed = parse_table_json(render_table_json(table));
  if (!(reparsed == table)) return "c=" + std::to_string(c) + " JSON rendering does not re-parse identically";
  if (table.alpha() != alpha) {
    return "c=" + std::to_string(c) + " nu=" + std::to_string(nu) + " alpha=" + to_string(table.alpha()) +
           ", expected " + to_string(alpha);
  }
  std::size_t entries = 0;
  for (VersionSet s : table.states()) entries += s.size();
  if (entries != expected.size()) return "entry count differs";
  for (const auto& e : expected) {
    if (table.at(e.state, e.version) != e.value) {
      return "c=" + std::to_string(c) + " nu=" + std::to_string(nu) + " state " + e.state.to_string() + " v" +
             std::to_string(e.version) + " = " + to_string(table.at(e.state, e.version)) + ", expected " +
             to_string(e.value);
    }
  }
  return {};
}

CriterionResult c1() {
  CriterionResult r = titled(1, "allocation tables (c,nu) = (2,2), (7,3), (5,3)");
  const auto start = Clock::now();
  std::string why = check_table(2, 2, q(3, 4), published_c2_nu2());
  if (why.empty()) why = check_table(7, 3, q(1, 3), published_c7_nu3());
  if (why.empty()) why = check_table(5, 3, q(7, 15), published_c5_nu3());
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = why.empty() && r.seconds < 1.0;
  r.detail = why.empty() ? "alphas 3/4, 1/3, 7/15; every entry exact" : why;
  return r;
}

CriterionResult c2() {
  CriterionResult r = titled(2, "construction codes pass the exhaustive decode check");
  const int cases[][3] = {{3, 2, 2}, {4, 2, 2}, {4, 3, 2}, {4, 3, 3}, {5, 4, 3}};
  std::ostringstream report;
  r.pass = true;
  std::uint64_t states = 0, decodes = 0;
  for (const auto& [n, c, nu] : cases) {
    const AllocationTable table = build_construction_table(c, nu);
    const CodecCheckReport rep = exhaustive_codec_check(table, n, c, 3, kDefaultSeed);
    report << "n=" << n << " c=" << c << " nu=" << nu << ' ' << render_report(rep) << '\n';
    states += rep.system_states;
    decodes += rep.decodes;
    if (!rep.ok && r.pass) {
      r.pass = false;
      r.detail = "n=" + std::to_string(n) + " c=" + std::to_string(c) + " nu=" + std::to_string(nu) + ": " +
                 (rep.violation ? describe(*rep.violation) : std::string("failed"));
    }
  }
  if (r.pass) {
    r.detail = std::to_string(states) + " system states, " + std::to_string(decodes) + " decodes, no violations";
  }
  r.report = report.str();
  return r;
}

CriterionResult c3() {
  CriterionResult r = titled(3, "construction cost against min(1, nu/c)");
  int strict = 0, equal = 0;
  std::string why;
  for (int nu = 2; nu <= 5 && why.empty(); ++nu) {
    for (int c = 1; c <= 30; ++c) {
      const Rational a = construction_alpha(c, nu);
      const Rational base = min_baseline(c, nu);
      if (a > base) {
        why = "c=" + std::to_string(c) + " nu=" + std::to_string(nu) + ": " + to_string(a) + " > " + to_string(base);
        break;
      }
      if (nu <= c - 1 && a == base) {
        why = "c=" + std::to_string(c) + " nu=" + std::to_string(nu) + ": no strict gain";
        break;
      }
      (a == base ? equal : strict)++;
    }
  }
  r.pass = why.empty();
  r.detail = why.empty() ? std::to_string(strict) + " strict rows, " + std::to_string(equal) +
                               " equal rows (all with c <= nu)"
                         : why;
  return r;
}

CriterionResult c4() {
  CriterionResult r = titled(4, "converse bound formula");
  const BoundValue b = theorem2_bound(7, 3, 128);
  const HighFloat exact = HighFloat(1) / 3 - boost::multiprecision::log(HighFloat(2268)) /
                                                 boost::multiprecision::log(HighFloat(2)) / 1152;
  const long double err = std::fabs(b.value() - exact.convert_to<long double>());
  std::string why;
  if (b.leading != q(1, 3)) why = "leading term " + to_string(b.leading);
  if (why.empty() && err > 1e-12L) why = "value differs by " + std::to_string(static_cast<double>(err));
  for (int c = 1; c <= 40 && why.empty(); ++c) {
    for (int logm : {8, 64, 128, 1024}) {
      const BoundValue two = theorem2_bound(c, 2, logm);
      const HighFloat penalty =
          boost::multiprecision::log(HighFloat(c)) / boost::multiprecision::log(HighFloat(2)) / ((c + 1) * logm);
      if (two.leading != q(2, c + 1) ||
          std::fabs(two.penalty - penalty.convert_to<long double>()) > 1e-15L) {
        why = "nu=2 refinement differs at c=" + std::to_string(c) + " logM=" + std::to_string(logm);
        break;
      }
    }
  }
  r.pass = why.empty();
  std::ostringstream detail;
  detail << std::setprecision(15) << "bound(7,3,128)=" << static_cast<double>(b.value())
         << " error=" << static_cast<double>(err) << "; nu=2 penalty log2(c)/((c+1)logM) for c<=40";
  r.detail = why.empty() ? detail.str() : why;
  return r;
}

CriterionResult c5() {
  CriterionResult r = titled(5, "gap to the converse when nu | (c-1)");
  const int cases[][2] = {{3, 2}, {7, 3}, {5, 2}};
  std::string why;
  std::ostringstream detail;
  for (const auto& [c, nu] : cases) {
    if ((c - 1) % nu != 0) {
      why = "case without divisibility";
      break;
    }
    long double previous = INFINITY;
    detail << "(" << c << "," << nu << "):";
    for (int logm : {64, 128, 1024, 1 << 16}) {
      const long double gap = construction_alpha(c, nu).convert_to<long double>() - theorem2_bound(c, nu, logm).value();
      const long double allowance = general_bound(c, nu, logm).penalty;
      if (gap > allowance + 1e-18L) {
        why = "gap exceeds the log term at c=" + std::to_string(c) + " logM=" + std::to_string(logm);
        break;
      }
      if (!(gap < previous)) {
        why = "gap not decreasing at c=" + std::to_string(c) + " logM=" + std::to_string(logm);
        break;
      }
      previous = gap;
      if (logm <= 1024) detail << ' ' << std::setprecision(4) << static_cast<double>(gap);
    }
    detail << "; ";
    if (!why.empty()) break;
  }
  r.pass = why.empty();
  r.detail = why.empty() ? detail.str() + "gaps shrink with logM" : why;
  return r;
}

CriterionResult c6() {
  CriterionResult r = titled(6, "optimizer meets the sandwich");
  const auto start = Clock::now();
  const int cases[][2] = {{2, 2}, {3, 2}, {7, 3}, {4, 2}, {3, 3}};
  const std::map<std::pair<int, int>, Rational> forced = {{{2, 2}, q(3, 4)}, {{3, 2}, q(1, 2)}, {{7, 3}, q(1, 3)}};
  std::ostringstream detail;
  std::string why;
  for (const auto& [c, nu] : cases) {
    const MilpResult res = solve_milp(c, nu);
    const Rational lower(nu, c + nu - 1);
    if (res.alpha_star < lower || res.alpha_star > construction_alpha(c, nu)) {
      why = "alpha*=" + to_string(res.alpha_star) + " outside the sandwich at c=" + std::to_string(c);
      break;
    }
    if (auto it = forced.find({c, nu}); it != forced.end() && res.alpha_star != it->second) {
      why = "alpha*(" + std::to_string(c) + "," + std::to_string(nu) + ")=" + to_string(res.alpha_star) +
            ", expected " + to_string(it->second);
      break;
    }
    if (res.proof.lp_certificates_verified == 0 || res.proof.nodes == 0) {
      why = "no verified LP certificate at c=" + std::to_string(c);
      break;
    }
    detail << "(" << c << "," << nu << ")=" << to_string(res.alpha_star) << " ";
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (why.empty() && r.seconds > 300) why = "took longer than 5 minutes";
  r.pass = why.empty();
  r.detail = why.empty() ? detail.str() + "with verified certificates" : why;
  return r;
}

CriterionResult c7() {
  CriterionResult r = titled(7, "auxiliary-variable map is injective and inverts");
  const std::uint64_t cases[][3] = {{2, 2, 3}, {3, 2, 4}, {3, 3, 4}};
  std::ostringstream report;
  std::string why;
  int runs = 0;
  for (const auto& [c, nu, m] : cases) {
    for (const char* family : {"construction", "replication", "mds"}) {
      const auto code = make_code(family, static_cast<int>(c) + 1, static_cast<int>(c), static_cast<int>(nu));
      const BijectionReport rep = bijection_check(*code, m);
      report << render_report(rep) << '\n';
      ++runs;
      if (why.empty() && (!rep.ok() || rep.tuples != rep.expected_tuples)) why = render_report(rep);
    }
  }
  r.pass = why.empty();
  r.detail = why.empty() ? std::to_string(runs) + " runs, all injective with exact round trips" : why;
  r.report = report.str();
  return r;
}

CriterionResult c8() {
  CriterionResult r = titled(8, "stale decoder is caught by both detectors");
  const auto code = make_code("stale", 3, 2, 2);
  const CodecCheckReport check = exhaustive_codec_check(*code, 3, kDefaultSeed);
  const BijectionReport bij = bijection_check(*code, 3);
  const bool checker_fires = !check.ok && check.violation &&
                             check.violation->reason == ViolationReason::version_too_old;
  const bool converse_fires = bij.contract_error.has_value() || !bij.injective;
  r.pass = checker_fires && converse_fires;
  std::ostringstream detail;
  detail << "decode check: " << (check.violation ? to_string(check.violation->reason) : std::string("no violation"))
         << "; converse: "
         << (bij.contract_error ? "contract error" : (!bij.injective ? "collision" : "no detection"));
  r.detail = detail.str();
  return r;
}

CriterionResult c9() {
  CriterionResult r = titled(9, "toy model N=5 f=1 T=3 logM=12");
  const auto start = Clock::now();
  std::ostringstream report;
  std::string why;
  int max_bits = 0;
  int min_replication_bits = 1 << 30;
  std::uint64_t reads = 0;
  for (Scheme scheme : {Scheme::construction, Scheme::replication}) {
    SimConfig exhaustive;
    exhaustive.n = 5;
    exhaustive.f = 1;
    exhaustive.t = 3;
    exhaustive.logm_bits = 12;
    exhaustive.horizon = 5;
    exhaustive.channel = Channel::delay;
    exhaustive.mode = PatternMode::exhaustive;
    exhaustive.scheme = scheme;
    std::vector<SimConfig> configs{exhaustive};
    for (Channel channel : {Channel::delay, Channel::erasure}) {
      SimConfig random = exhaustive;
      random.mode = PatternMode::random;
      random.channel = channel;
      random.horizon = 12;
      random.random_patterns = 1000;
      configs.push_back(random);
    }
    for (const auto& config : configs) {
      const SimReport rep = run_campaign(config);
      report << to_string(config.channel) << ' ' << to_string(config.mode) << '\n' << render_report(rep);
      reads += rep.reads_total;
      if (!rep.ok() && why.empty()) why = to_string(scheme) + ": " + rep.first_failure.value_or("failure");
      if (scheme == Scheme::construction) {
        max_bits = std::max(max_bits, rep.max_storage_bits);
      } else {
        min_replication_bits = std::min(min_replication_bits, rep.max_storage_bits);
      }
    }
  }
  const int tag_bits = 3;
  if (why.empty() && max_bits > 6 + tag_bits) why = "construction stores " + std::to_string(max_bits) + " bits";
  if (why.empty() && min_replication_bits < 12 + tag_bits) {
    why = "replication stores only " + std::to_string(min_replication_bits) + " bits";
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (why.empty() && r.seconds > 120) why = "took longer than 2 minutes";
  r.pass = why.empty();
  r.detail = why.empty() ? std::to_string(reads) + " reads ok; storage " + std::to_string(max_bits) +
                               " bits vs replication " + std::to_string(min_replication_bits)
                         : why;
  r.report = report.str();
  return r;
}

CriterionResult c10(const std::vector<CriterionResult>& earlier) {
  CriterionResult r = titled(10, "repeated runs give byte-identical reports");
  std::string why;
  for (int id : {2, 7, 9}) {
    std::string first;
    for (const auto& e : earlier)
      if (e.id == id) first = e.report;
    if (first.empty()) first = run_criterion(id).report;
    const std::string second = run_criterion(id).report;
    if (first.empty() || first != second) {
      why = "criterion " + std::to_string(id) + " report changed between runs";
      break;
    }
  }
  r.pass = why.empty();
  r.detail = why.empty() ? "reports of criteria 2, 7 and 9 match" : why;
  return r;
}

CriterionResult guarded(int id, const std::function<CriterionResult()>& body) {
  const auto start = Clock::now();
  CriterionResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.id = id;
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.id = id;
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  if (r.seconds == 0) r.seconds = elapsed;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
  switch (id) {
    case 1: return guarded(1, c1);
    case 2: return guarded(2, c2);
    case 3: return guarded(3, c3);
    case 4: return guarded(4, c4);
    case 5: return guarded(5, c5);
    case 6: return guarded(6, c6);
    case 7: return guarded(7, c7);
    case 8: return guarded(8, c8);
    case 9: return guarded(9, c9);
    case 10: return guarded(10, [] { return c10({}); });
    default: throw PreconditionError("criteria are numbered 1 to 10");
  }
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream out;
  out << "criterion " << std::setw(2) << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.title << " ("
      << std::fixed << std::setprecision(2) << r.seconds << " s) " << r.detail;
  return out.str();
}

std::vector<CriterionResult> run_all(std::ostream& out) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= 9; ++id) {
    results.push_back(run_criterion(id));
    out << format_line(results.back()) << std::endl;
  }
  results.push_back(guarded(10, [&] { return c10(results); }));
  out << format_line(results.back()) << std::endl;
  return results;
}

}  // namespace mvc::acceptance

// mvcode: allocation tables, code checks, optimizer, bounds, converse lab,
// toy-model simulation and cost curves from the command line.
//
// Exit status: 0 success, 1 a checked property failed, 2 usage or parameter error.

#include "mvc/acceptance.hpp"
#include "mvc/alloc_optimizer.hpp"
#include "mvc/allocation.hpp"
#include "mvc/code.hpp"
#include "mvc/converse_lab.hpp"
#include "mvc/errors.hpp"
#include "mvc/storage_sim.hpp"
#include "mvc/table_io.hpp"
#include "mvc/verifier.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

std::string exact(const mvc::Rational& r) { return mvc::to_string(r) + " (" + mvc::to_decimal(r) + ")"; }

std::string fixed6(long double x) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << static_cast<double>(x);
  return out.str();
}

// "log2(K)/D" for the subtracted term of the bound
std::string penalty_expr(int c, int nu, int logm) {
  if (nu == 2) return "log2(" + std::to_string(c) + ")/" + std::to_string((c + 1) * logm);
  mvc::BigInt k = 1;
  for (int i = 0; i < nu; ++i) k *= nu;
  mvc::BigInt binom = 1;
  const int span = c + nu - 1;
  for (int i = 1; i <= nu; ++i) binom = binom * (span - nu + i) / i;
  k *= binom;
  return "log2(" + k.str() + ")/" + std::to_string(span * logm);
}

struct AllocArgs {
  int c = 2, nu = 2;
  std::string family = "construction";
  std::string format = "table";
};

int cmd_alloc(const AllocArgs& a) {
  const auto family = mvc::parse_family(a.family);
  if (family != mvc::TableFamily::construction && family != mvc::TableFamily::replication &&
      family != mvc::TableFamily::simple_mds) {
    throw mvc::PreconditionError("alloc supports construction, replication and mds");
  }
  const auto table = mvc::build_table(family, a.c, a.nu);
  if (a.format == "csv") {
    std::cout << mvc::render_table_csv(table);
  } else if (a.format == "json") {
    std::cout << mvc::render_table_json(table) << '\n';
  } else {
    std::cout << mvc::render_table_text(table);
  }
  return kOk;
}

struct VerifyArgs {
  int n = 3, c = 0, nu = 2;
  std::string family = "construction";
  std::string table_path;
  int trials = 3;
  std::uint64_t seed = mvc::kDefaultSeed;
};

int cmd_verify(const VerifyArgs& a) {
  std::unique_ptr<mvc::AbstractCode> code;
  std::optional<mvc::AllocationTable> table;
  int c = a.c;
  if (!a.table_path.empty()) {
    table = mvc::load_table_file(a.table_path);
    if (c == 0) c = table->quorum();
    if (c != table->quorum()) throw mvc::PreconditionError("--c differs from the table's quorum");
  } else {
    if (c == 0) throw mvc::PreconditionError("--c is required without --table");
    if (a.family != "stale") table = mvc::build_table(mvc::parse_family(a.family), c, a.nu);
  }
  if (c > a.n) throw mvc::PreconditionError("c=" + std::to_string(c) + " exceeds n=" + std::to_string(a.n));

  if (table) {
    if (auto v = mvc::feasibility_check(*table, c)) {
      std::cout << "allocation infeasible: " << mvc::describe(*v) << '\n';
      return kViolation;
    }
    std::cout << "allocation feasible, alpha=" << exact(table->alpha()) << '\n';
    code = std::make_unique<mvc::TableCode>(*table, a.n, mvc::to_string(table->family()));
  } else {
    code = mvc::make_code(a.family, a.n, c, a.nu);
  }
  const auto report = mvc::exhaustive_codec_check(*code, a.trials, a.seed);
  std::cout << mvc::render_report(report) << '\n';
  return report.ok ? kOk : kViolation;
}

struct OptimizeArgs {
  int c = 2, nu = 2;
  std::string order = "zero-first";
  bool no_seed = false;
  std::string format = "table";
};

int cmd_optimize(const OptimizeArgs& a) {
  mvc::MilpOptions options;
  options.order = a.order == "one-first" ? mvc::BranchOrder::one_first : mvc::BranchOrder::zero_first;
  options.seed_with_construction = !a.no_seed;
  const auto result = mvc::solve_milp(a.c, a.nu, options);
  if (a.format == "json") {
    std::cout << mvc::render_table_json(result.table) << '\n';
    return kOk;
  }
  std::cout << "alpha*=" << exact(result.alpha_star) << " lower=" << exact(mvc::Rational(a.nu, a.c + a.nu - 1))
            << " construction=" << exact(mvc::construction_alpha(a.c, a.nu)) << '\n';
  std::cout << (a.format == "csv" ? mvc::render_table_csv(result.table) : mvc::render_table_text(result.table));
  std::cout << mvc::render_certificate(result.proof) << '\n';
  return kOk;
}

struct BoundArgs {
  int c = 2, nu = 2, logm = 128;
};

int cmd_bound(const BoundArgs& a) {
  const auto b = mvc::theorem2_bound(a.c, a.nu, a.logm);
  std::cout << "bound=" << mvc::to_string(b.leading) << " - " << penalty_expr(a.c, a.nu, a.logm) << '\n'
            << "leading=" << exact(b.leading) << '\n'
            << "penalty=" << fixed6(b.penalty) << '\n'
            << "value=" << std::setprecision(15) << static_cast<double>(b.value()) << " (" << fixed6(b.value())
            << ")\n"
            << "construction=" << exact(mvc::construction_alpha(a.c, a.nu)) << '\n';
  return kOk;
}

struct AuxArgs {
  int n = 0, c = 2, nu = 2;
  std::uint64_t m = 3;
  std::string family = "construction";
  bool fault = false;
};

int cmd_auxcheck(const AuxArgs& a) {
  const int n = a.n == 0 ? a.c + 1 : a.n;
  const auto code = mvc::make_code(a.fault ? "stale" : a.family, n, a.c, a.nu);
  const auto report = mvc::bijection_check(*code, a.m);
  std::cout << "injective: " << (report.injective ? "true" : "false") << ", tuples: " << report.tuples << '\n'
            << mvc::render_report(report) << '\n';
  return report.ok() ? kOk : kViolation;
}

struct SimArgs {
  mvc::SimConfig config;
  std::string channel = "delay";
  std::string mode = "random";
  std::string scheme = "construction";
  std::string pattern_path;
  std::string trace_path;
};

int cmd_simulate(SimArgs a) {
  auto& cfg = a.config;
  cfg.channel = mvc::parse_channel(a.channel);
  cfg.scheme = mvc::parse_scheme(a.scheme);
  if (a.mode == "exhaustive") {
    cfg.mode = mvc::PatternMode::exhaustive;
  } else if (a.mode == "random") {
    cfg.mode = mvc::PatternMode::random;
  } else if (a.mode == "explicit") {
    cfg.mode = mvc::PatternMode::explicit_trace;
  } else {
    throw mvc::PreconditionError("unknown pattern mode '" + a.mode + "'");
  }

  const auto bounds = mvc::claim_bounds(cfg);
  std::cout << "achievable="
            << (bounds.achievable ? exact(*bounds.achievable) : std::string("unsupported (T does not divide N-f-1)"))
            << '\n';
  if (bounds.delay_lb) std::cout << "delay_lb=" << fixed6(bounds.delay_lb->value()) << '\n';
  std::cout << "erasure_lb=" << fixed6(bounds.erasure_lb.value()) << '\n';

  mvc::SimReport report;
  if (cfg.mode == mvc::PatternMode::explicit_trace) {
    if (a.pattern_path.empty()) throw mvc::PreconditionError("--mode explicit needs --pattern");
    std::ifstream in(a.pattern_path);
    if (!in) throw mvc::PreconditionError("cannot read " + a.pattern_path);
    std::stringstream text;
    text << in.rdbuf();
    const auto pattern = mvc::parse_pattern_json(text.str());
    std::ofstream trace_file;
    if (!a.trace_path.empty()) {
      trace_file.open(a.trace_path);
      if (!trace_file) throw mvc::PreconditionError("cannot write " + a.trace_path);
    }
    report = mvc::run_simulation(cfg, pattern, true, cfg.seed, a.trace_path.empty() ? nullptr : &trace_file);
  } else {
    if (!a.trace_path.empty()) throw mvc::PreconditionError("--trace needs --mode explicit");
    report = mvc::run_campaign(cfg);
  }
  std::cout << mvc::render_report(report);
  return report.ok() ? kOk : kViolation;
}

struct CurvesArgs {
  int nu = 5, c_max = 30, logm = 128;
  std::string out;
};

int cmd_curves(const CurvesArgs& a) {
  if (a.c_max < 1) throw mvc::PreconditionError("--cmax must be positive");
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw mvc::PreconditionError("cannot write " + a.out);
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  out << "c,construction_alpha,construction_decimal,min_baseline,min_baseline_decimal,bound_leading,bound_value\n";
  for (int c = 1; c <= a.c_max; ++c) {
    const auto alpha = mvc::construction_alpha(c, a.nu);
    const auto base = mvc::min_baseline(c, a.nu);
    const auto bound = mvc::theorem2_bound(c, a.nu, a.logm);
    out << c << ',' << mvc::to_string(alpha) << ',' << mvc::to_decimal(alpha) << ',' << mvc::to_string(base) << ','
        << mvc::to_decimal(base) << ',' << mvc::to_string(bound.leading) << ',' << fixed6(bound.value()) << '\n';
  }
  if (!out) throw mvc::PreconditionError("write failed");
  return kOk;
}

int cmd_selftest() {
  const auto results = mvc::acceptance::run_all(std::cout);
  for (const auto& r : results)
    if (!r.pass) return kViolation;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-version code toolkit"};
  app.require_subcommand(1);

  AllocArgs alloc;
  auto* s_alloc = app.add_subcommand("alloc", "Print an allocation table");
  s_alloc->add_option("--c", alloc.c, "Servers contacted by a reader")->check(CLI::Range(1, 64));
  s_alloc->add_option("--nu", alloc.nu, "Number of versions")->check(CLI::Range(1, mvc::kMaxVersions));
  s_alloc->add_option("--family", alloc.family)->check(CLI::IsMember({"construction", "replication", "mds"}));
  s_alloc->add_option("--format", alloc.format)->check(CLI::IsMember({"table", "csv", "json"}));

  VerifyArgs verify;
  auto* s_verify = app.add_subcommand("verify", "Check an allocation and its code exhaustively");
  s_verify->add_option("--n", verify.n, "Servers")->check(CLI::Range(1, 64));
  s_verify->add_option("--c", verify.c)->check(CLI::Range(1, 64));
  s_verify->add_option("--nu", verify.nu)->check(CLI::Range(1, mvc::kMaxVersions));
  s_verify->add_option("family,--family", verify.family)
      ->check(CLI::IsMember({"construction", "replication", "mds", "stale"}));
  s_verify->add_option("--table", verify.table_path, "JSON allocation table");
  s_verify->add_option("--trials", verify.trials)->check(CLI::Range(1, 1000));
  s_verify->add_option("--seed", verify.seed);

  OptimizeArgs optimize;
  auto* s_opt = app.add_subcommand("optimize", "Exact minimum storage cost over separate-coding allocations");
  s_opt->add_option("--c", optimize.c)->check(CLI::Range(1, 64));
  s_opt->add_option("--nu", optimize.nu)->check(CLI::Range(1, mvc::kMaxVersions));
  s_opt->add_option("--order", optimize.order)->check(CLI::IsMember({"zero-first", "one-first"}));
  s_opt->add_flag("--no-seed", optimize.no_seed, "Start without the construction as incumbent");
  s_opt->add_option("--format", optimize.format)->check(CLI::IsMember({"table", "csv", "json"}));

  BoundArgs bound;
  auto* s_bound = app.add_subcommand("bound", "Lower bound on the storage cost");
  s_bound->add_option("--c", bound.c)->check(CLI::Range(1, 1 << 20));
  s_bound->add_option("--nu", bound.nu)->check(CLI::Range(1, 1 << 10));
  s_bound->add_option("--logm", bound.logm, "Bits per version")->check(CLI::Range(1, 1 << 30));

  AuxArgs aux;
  auto* s_aux = app.add_subcommand("auxcheck", "Injectivity of the auxiliary-variable map");
  s_aux->add_option("--n", aux.n, "Servers (default c+1)")->check(CLI::Range(1, 64));
  s_aux->add_option("--c", aux.c)->check(CLI::Range(1, 64));
  s_aux->add_option("--nu", aux.nu)->check(CLI::Range(1, mvc::kMaxVersions));
  s_aux->add_option("--m", aux.m, "Message alphabet size")->check(CLI::Range(1, 1 << 20));
  s_aux->add_option("--family", aux.family)->check(CLI::IsMember({"construction", "replication", "mds", "stale"}));
  s_aux->add_flag("--fault", aux.fault, "Use the stale decoder");

  SimArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "Toy storage model with delay or erasure channels");
  s_sim->add_option("--N", sim.config.n, "Servers");
  s_sim->add_option("--f", sim.config.f, "Tolerated failures");
  s_sim->add_option("--T", sim.config.t, "Window length");
  s_sim->add_option("--logm", sim.config.logm_bits, "Bits per version");
  s_sim->add_option("--horizon", sim.config.horizon, "Slots");
  s_sim->add_option("--channel", sim.channel)->check(CLI::IsMember({"delay", "erasure"}));
  s_sim->add_option("--mode", sim.mode)->check(CLI::IsMember({"exhaustive", "random", "explicit"}));
  s_sim->add_option("--scheme", sim.scheme)->check(CLI::IsMember({"construction", "replication"}));
  s_sim->add_option("--seed", sim.config.seed);
  s_sim->add_option("--patterns", sim.config.random_patterns, "Random patterns");
  s_sim->add_option("--pattern", sim.pattern_path, "JSON arrival pattern for --mode explicit");
  s_sim->add_option("--trace", sim.trace_path, "Write JSON-lines events here");

  CurvesArgs curves;
  auto* s_curves = app.add_subcommand("curves", "Storage cost against c as CSV");
  s_curves->add_option("--nu", curves.nu)->check(CLI::Range(1, 64));
  s_curves->add_option("--cmax", curves.c_max)->check(CLI::Range(1, 4096));
  s_curves->add_option("--logm", curves.logm)->check(CLI::Range(1, 1 << 30));
  s_curves->add_option("--out", curves.out, "Output file (default stdout)");

  auto* s_self = app.add_subcommand("selftest", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*s_alloc) return cmd_alloc(alloc);
    if (*s_verify) return cmd_verify(verify);
    if (*s_opt) return cmd_optimize(optimize);
    if (*s_bound) return cmd_bound(bound);
    if (*s_aux) return cmd_auxcheck(aux);
    if (*s_sim) return cmd_simulate(sim);
    if (*s_curves) return cmd_curves(curves);
    if (*s_self) return cmd_selftest();
  } catch (const mvc::BudgetExceededError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kUsage;
  } catch (const mvc::ContractError& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kViolation;
  } catch (const mvc::CodeInfeasibleError& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kViolation;
  } catch (const mvc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

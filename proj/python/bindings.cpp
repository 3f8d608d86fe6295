#include "mvc/acceptance.hpp"
#include "mvc/alloc_optimizer.hpp"
#include "mvc/allocation.hpp"
#include "mvc/code.hpp"
#include "mvc/converse_lab.hpp"
#include "mvc/errors.hpp"
#include "mvc/storage_sim.hpp"
#include "mvc/table_io.hpp"
#include "mvc/verifier.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

// Rationals cross the boundary as "p/q" strings; the Python layer turns
// them into fractions.Fraction.
py::dict violation_dict(const mvc::Violation& v) {
  py::list states;
  for (auto s : v.system_state) states.append(s.to_string());
  py::list subset;
  for (int i : v.subset) subset.append(i + 1);
  py::dict d;
  d["states"] = states;
  d["servers"] = subset;
  d["reason"] = mvc::to_string(v.reason);
  d["detail"] = v.detail;
  d["text"] = mvc::describe(v);
  return d;
}

py::object maybe_violation(const std::optional<mvc::Violation>& v) {
  return v ? py::object(violation_dict(*v)) : py::none();
}

py::dict bound_dict(const mvc::BoundValue& b) {
  py::dict d;
  d["leading"] = mvc::to_string(b.leading);
  d["penalty"] = static_cast<double>(b.penalty);
  d["value"] = static_cast<double>(b.value());
  return d;
}

mvc::SimConfig sim_config(int n, int f, int t, int logm, int horizon, const std::string& channel,
                          const std::string& mode, std::uint64_t seed, int patterns, const std::string& scheme) {
  mvc::SimConfig c;
  c.n = n;
  c.f = f;
  c.t = t;
  c.logm_bits = logm;
  c.horizon = horizon;
  c.channel = mvc::parse_channel(channel);
  if (mode == "exhaustive") {
    c.mode = mvc::PatternMode::exhaustive;
  } else if (mode == "random") {
    c.mode = mvc::PatternMode::random;
  } else {
    throw mvc::PreconditionError("mode must be 'exhaustive' or 'random'");
  }
  c.seed = seed;
  c.random_patterns = patterns;
  c.scheme = mvc::parse_scheme(scheme);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-version code toolkit (native core)";

  static py::exception<mvc::Error> base_error(m, "Error");
  py::register_exception<mvc::PreconditionError>(m, "PreconditionError", base_error.ptr());
  py::register_exception<mvc::ConfigurationError>(m, "ConfigurationError", base_error.ptr());
  py::register_exception<mvc::BudgetExceededError>(m, "BudgetExceededError", base_error.ptr());
  py::register_exception<mvc::ContractError>(m, "ContractError", base_error.ptr());
  py::register_exception<mvc::CodeInfeasibleError>(m, "CodeInfeasibleError", base_error.ptr());
  py::register_exception<mvc::DomainError>(m, "DomainError", base_error.ptr());
  py::register_exception<mvc::InsufficientDataError>(m, "InsufficientDataError", base_error.ptr());

  m.def("construction_alpha", [](int c, int nu) { return mvc::to_string(mvc::construction_alpha(c, nu)); },
        py::arg("c"), py::arg("nu"));
  m.def("min_baseline", [](int c, int nu) { return mvc::to_string(mvc::min_baseline(c, nu)); }, py::arg("c"),
        py::arg("nu"));
  m.def("compute_t", &mvc::compute_t, py::arg("c"), py::arg("nu"));

  m.def(
      "allocation_table_json",
      [](const std::string& family, int c, int nu) {
        return mvc::render_table_json(mvc::build_table(mvc::parse_family(family), c, nu));
      },
      py::arg("family"), py::arg("c"), py::arg("nu"));

  m.def(
      "feasibility_check",
      [](const std::string& table_json) {
        const auto table = mvc::parse_table_json(table_json);
        return maybe_violation(mvc::feasibility_check(table, table.quorum()));
      },
      py::arg("table_json"));

  m.def(
      "verify",
      [](const std::string& family, int n, int c, int nu, int trials, std::uint64_t seed) {
        const auto code = mvc::make_code(family, n, c, nu);
        mvc::CodecCheckReport r;
        {
          py::gil_scoped_release release;
          r = mvc::exhaustive_codec_check(*code, trials, seed);
        }
        py::dict d;
        d["ok"] = r.ok;
        d["system_states"] = r.system_states;
        d["decodes"] = r.decodes;
        d["violation"] = maybe_violation(r.violation);
        return d;
      },
      py::arg("family"), py::arg("n"), py::arg("c"), py::arg("nu"), py::arg("trials") = 3,
      py::arg("seed") = mvc::kDefaultSeed);

  m.def(
      "theorem2_bound", [](int c, int nu, int logm) { return bound_dict(mvc::theorem2_bound(c, nu, logm)); },
      py::arg("c"), py::arg("nu"), py::arg("logm"));

  m.def(
      "solve_milp",
      [](int c, int nu, bool seed_with_construction) {
        mvc::MilpOptions options;
        options.seed_with_construction = seed_with_construction;
        mvc::MilpResult r = [&] {
          py::gil_scoped_release release;
          return mvc::solve_milp(c, nu, options);
        }();
        py::dict d;
        d["alpha"] = mvc::to_string(r.alpha_star);
        d["table_json"] = mvc::render_table_json(r.table);
        d["nodes"] = r.proof.nodes;
        d["certificates"] = r.proof.lp_certificates_verified;
        d["certificate"] = mvc::render_certificate(r.proof);
        return d;
      },
      py::arg("c"), py::arg("nu"), py::arg("seed_with_construction") = true);

  m.def(
      "bijection_check",
      [](const std::string& family, int c, int nu, std::uint64_t m_size, int n) {
        const auto code = mvc::make_code(family, n == 0 ? c + 1 : n, c, nu);
        const auto r = mvc::bijection_check(*code, m_size);
        py::dict d;
        d["tuples"] = r.tuples;
        d["expected_tuples"] = r.expected_tuples;
        d["distinct_images"] = r.distinct_images;
        d["injective"] = r.injective;
        d["round_trip"] = r.round_trip;
        d["contract_error"] = r.contract_error ? py::object(py::str(*r.contract_error)) : py::none();
        d["ok"] = r.ok();
        d["report"] = mvc::render_report(r);
        return d;
      },
      py::arg("family"), py::arg("c"), py::arg("nu"), py::arg("m"), py::arg("n") = 0);

  m.def(
      "simulate",
      [](int n, int f, int t, int logm, int horizon, const std::string& channel, const std::string& mode,
         std::uint64_t seed, int patterns, const std::string& scheme) {
        const auto cfg = sim_config(n, f, t, logm, horizon, channel, mode, seed, patterns, scheme);
        mvc::SimReport r;
        {
          py::gil_scoped_release release;
          r = mvc::run_campaign(cfg);
        }
        py::dict d;
        d["ok"] = r.ok();
        d["max_storage_bits"] = r.max_storage_bits;
        d["patterns"] = r.patterns;
        d["reads"] = r.reads_total;
        d["failures"] = r.failures;
        d["staleness"] = r.staleness;
        d["report"] = mvc::render_report(r);
        return d;
      },
      py::arg("n"), py::arg("f"), py::arg("t"), py::arg("logm") = 12, py::arg("horizon") = 5,
      py::arg("channel") = "delay", py::arg("mode") = "random", py::arg("seed") = mvc::kDefaultSeed,
      py::arg("patterns") = 1000, py::arg("scheme") = "construction");

  m.def(
      "claim_bounds",
      [](int n, int f, int t, int logm) {
        mvc::SimConfig c;
        c.n = n;
        c.f = f;
        c.t = t;
        c.logm_bits = logm;
        const auto b = mvc::claim_bounds(c);
        py::dict d;
        d["achievable"] = b.achievable ? py::object(py::str(mvc::to_string(*b.achievable))) : py::none();
        d["delay_lb"] = b.delay_lb ? py::object(bound_dict(*b.delay_lb)) : py::none();
        d["erasure_lb"] = bound_dict(b.erasure_lb);
        return d;
      },
      py::arg("n"), py::arg("f"), py::arg("t"), py::arg("logm"));

  m.def(
      "run_criterion",
      [](int id) {
        mvc::acceptance::CriterionResult r;
        {
          py::gil_scoped_release release;
          r = mvc::acceptance::run_criterion(id);
        }
        py::dict d;
        d["id"] = r.id;
        d["title"] = r.title;
        d["pass"] = r.pass;
        d["detail"] = r.detail;
        d["seconds"] = r.seconds;
        return d;
      },
      py::arg("id"));
}

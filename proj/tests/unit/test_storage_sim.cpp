#include "mvc/errors.hpp"
#include "mvc/storage_sim.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <sstream>

using namespace mvc;

namespace {

SimConfig base(int n, int f, int t, int horizon, Channel channel, PatternMode mode) {
  SimConfig c;
  c.n = n;
  c.f = f;
  c.t = t;
  c.horizon = horizon;
  c.channel = channel;
  c.mode = mode;
  return c;
}

// every (N-f)-subset and every full window has a packet delivered to the whole subset
bool erasure_guarantee_holds(const SimConfig& c, const ArrivalPattern& p) {
  for (std::uint32_t s = 0; s < (1u << c.n); ++s) {
    if (__builtin_popcount(s) != c.n - c.f) continue;
    for (int first = 1; first + c.t - 1 <= c.horizon; ++first) {
      bool hit = false;
      for (int v = first; v < first + c.t && !hit; ++v) {
        bool all = true;
        for (int m = 0; m < c.n; ++m)
          if ((s >> m) & 1u) all = all && p.delivered[m][v - 1];
        hit = all;
      }
      if (!hit) return false;
    }
  }
  return true;
}

long double hp_log2(long double x) {
  using F = boost::multiprecision::cpp_bin_float_50;
  return (boost::multiprecision::log(F(x)) / boost::multiprecision::log(F(2))).convert_to<long double>();
}

}  // namespace

TEST_SUITE("storage_sim") {
  TEST_CASE("synchronous channel has one pattern and no staleness") {
    auto c = base(3, 1, 1, 4, Channel::delay, PatternMode::exhaustive);
    CHECK(exhaustive_pattern_count(c) == 1);
    const auto lit = run_exhaustive_literal(c);
    CHECK(lit.patterns == 1);
    CHECK(lit.ok());
    CHECK(lit.staleness.size() == 1);
    CHECK(lit.staleness.count(0) == 1);
    for (const auto& r : lit.reads) CHECK(r.decoded == r.slot);
  }

  TEST_CASE("small delay enumeration") {
    auto c = base(2, 1, 2, 2, Channel::delay, PatternMode::exhaustive);
    CHECK(exhaustive_pattern_count(c) == 16);
    const auto r = run_exhaustive_literal(c);
    CHECK(r.patterns == 16);
    CHECK(r.ok());
  }

  TEST_CASE("factorized and literal delay enumeration agree") {
    for (auto c : {base(4, 1, 2, 3, Channel::delay, PatternMode::exhaustive),
                   base(2, 1, 2, 4, Channel::delay, PatternMode::exhaustive),
                   base(2, 1, 3, 3, Channel::delay, PatternMode::exhaustive)}) {
      const auto fact = run_campaign(c);
      const auto lit = run_exhaustive_literal(c);
      CHECK(fact.reads == lit.reads);
      CHECK(fact.max_storage_bits == lit.max_storage_bits);
      CHECK(fact.ok());
    }
  }

  TEST_CASE("random erasure patterns keep the window guarantee") {
    auto c = base(5, 1, 3, 12, Channel::erasure, PatternMode::random);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
      const auto p = random_pattern(c, rng);
      CHECK(erasure_guarantee_holds(c, p));
      CHECK_FALSE(check_pattern(c, p));
    }
  }

  TEST_CASE("pattern checker rejects bad patterns") {
    auto c = base(3, 1, 2, 3, Channel::erasure, PatternMode::explicit_trace);
    ArrivalPattern none;
    none.channel = Channel::erasure;
    none.delivered.assign(3, std::vector<bool>(3, false));
    CHECK(check_pattern(c, none));
    CHECK_FALSE(erasure_guarantee_holds(c, none));
    CHECK_THROWS_AS(run_simulation(c, none), PreconditionError);

    auto d = base(3, 1, 2, 3, Channel::delay, PatternMode::explicit_trace);
    ArrivalPattern late;
    late.channel = Channel::delay;
    late.delay.assign(3, std::vector<int>(3, 0));
    late.delay[1][0] = 2;
    CHECK(check_pattern(d, late));
  }

  TEST_CASE("storage cost of the five-server example") {
    auto c = base(5, 1, 3, 5, Channel::delay, PatternMode::exhaustive);
    c.logm_bits = 12;
    const auto layout = storage_layout(c, Scheme::construction);
    CHECK(layout.length == 2);
    CHECK(layout.count == 1);
    CHECK(layout.payload_bits() == 6);
    CHECK(layout.tag_bits == 3);
    const auto r = run_campaign(c);
    CHECK(r.ok());
    CHECK(r.max_storage_bits == 9);
    // cost bound: ceil(T/(T+N-f-1) * logM) + ceil(log2 2T)
    CHECK(r.max_storage_bits <= 6 + 3);

    c.scheme = Scheme::replication;
    const auto rep = run_campaign(c);
    CHECK(rep.ok());
    CHECK(rep.max_storage_bits >= 12 + 3);
  }

  TEST_CASE("random campaigns on both channels") {
    for (Channel ch : {Channel::delay, Channel::erasure}) {
      auto c = base(5, 1, 3, 10, ch, PatternMode::random);
      c.random_patterns = 200;
      const auto r = run_campaign(c);
      CHECK(r.ok());
      CHECK(r.patterns == 200);
      CHECK(r.reads_total == 200u * 10u);
      for (const auto& rec : r.reads) CHECK(rec.decoded >= rec.slot - c.t + 1);
    }
  }

  TEST_CASE("exhaustive erasure needs a small horizon") {
    auto small = base(3, 1, 1, 3, Channel::erasure, PatternMode::exhaustive);
    const auto r = run_campaign(small);
    CHECK(r.ok());
    CHECK(r.patterns > 0);
    auto big = base(5, 1, 3, 5, Channel::erasure, PatternMode::exhaustive);
    CHECK_THROWS_AS(run_campaign(big), BudgetExceededError);
  }

  TEST_CASE("unsupported parameters") {
    auto c = base(5, 1, 2, 5, Channel::delay, PatternMode::random);
    CHECK_THROWS_AS(storage_layout(c, Scheme::construction), ConfigurationError);
    CHECK_NOTHROW(storage_layout(c, Scheme::replication));
    CHECK_FALSE(claim_bounds(c).achievable);
    CHECK_THROWS_AS(base(3, 3, 1, 3, Channel::delay, PatternMode::random).validate(), PreconditionError);
  }

  TEST_CASE("bounds for the five-server example") {
    auto c = base(5, 1, 3, 5, Channel::delay, PatternMode::random);
    c.logm_bits = 128;
    const auto b = claim_bounds(c);
    REQUIRE(b.achievable);
    CHECK(*b.achievable == Rational(1, 2));
    REQUIRE(b.delay_lb);
    CHECK(b.delay_lb->leading == Rational(2, 5));
    CHECK(static_cast<double>(b.delay_lb->penalty) ==
          doctest::Approx(static_cast<double>(hp_log2(4 * 10) / (5 * 128))).epsilon(1e-14));
    CHECK(b.erasure_lb.leading == Rational(1, 2));
    CHECK(static_cast<double>(b.erasure_lb.penalty) ==
          doctest::Approx(static_cast<double>(hp_log2(27 * 20) / (6 * 128))).epsilon(1e-14));
    c.t = 1;
    c.horizon = 5;
    CHECK_FALSE(claim_bounds(c).delay_lb);
  }

  TEST_CASE("reports and traces are reproducible") {
    auto c = base(5, 1, 3, 8, Channel::erasure, PatternMode::random);
    c.random_patterns = 50;
    CHECK(render_report(run_campaign(c)) == render_report(run_campaign(c)));

    auto e = base(4, 1, 2, 4, Channel::delay, PatternMode::explicit_trace);
    ArrivalPattern p;
    p.channel = Channel::delay;
    p.delay = {{0, 1, 1, 0}, {1, 0, 0, 1}, {1, 1, 1, 1}, {0, 0, 0, 0}};
    CHECK(parse_pattern_json(render_pattern_json(p)) == p);
    std::ostringstream t1, t2;
    const auto r1 = run_simulation(e, p, true, 0, &t1);
    run_simulation(e, p, true, 0, &t2);
    CHECK(r1.ok());
    CHECK(t1.str() == t2.str());
    std::istringstream lines(t1.str());
    std::string first;
    std::getline(lines, first);
    CHECK(first.rfind("{\"slot\":1,\"kind\":\"arrive\",\"server\":1,\"version\":1,\"decoded\":null,\"bits\":", 0) == 0);
    CHECK(t1.str().find("\"kind\":\"read\",\"subset\":[1,2,3]") != std::string::npos);
  }
}

#include "mvc/allocation.hpp"
#include "mvc/code.hpp"
#include "mvc/errors.hpp"
#include "mvc/verifier.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace mvc;

namespace {

// all c-tuples of nonempty states, sorted into multisets
std::set<SystemState> multisets_from_tuples(int nu, int c, bool require_common) {
  const auto states = nonempty_subsets(nu);
  std::set<SystemState> out;
  std::vector<std::size_t> idx(c, 0);
  while (true) {
    SystemState t;
    for (auto i : idx) t.push_back(states[i]);
    std::sort(t.begin(), t.end());
    if (!require_common || latest_common_version(t) > 0) out.insert(t);
    int k = c - 1;
    while (k >= 0 && idx[k] == states.size() - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return out;
}

}  // namespace

TEST_SUITE("verifier") {
  TEST_CASE("multisets match the tuple enumeration") {
    for (int nu = 1; nu <= 3; ++nu)
      for (int c = 1; c <= 4; ++c)
        for (bool common : {false, true}) {
          const auto got = state_multisets(nu, c, common);
          const std::set<SystemState> as_set(got.begin(), got.end());
          CHECK(as_set.size() == got.size());
          CHECK(as_set == multisets_from_tuples(nu, c, common));
        }
  }

  TEST_CASE("construction tables are feasible") {
    for (int c = 1; c <= 7; ++c)
      for (int nu = 1; nu <= 3; ++nu) CHECK_FALSE(feasibility_check(build_construction_table(c, nu), c));
  }

  TEST_CASE("halving one entry is caught at the right multiset") {
    auto t = build_construction_table(2, 2);
    t.set(VersionSet{2}, 2, Rational(1, 4));
    const auto v = feasibility_check(t, 2);
    REQUIRE(v);
    CHECK(v->system_state == SystemState{VersionSet{2}, VersionSet{2}});
    CHECK(v->reason == ViolationReason::no_version_covered);
    CHECK(describe(*v).find("{2}") != std::string::npos);
  }

  TEST_CASE("exhaustive decode check on construction codes") {
    const auto small = exhaustive_codec_check(build_construction_table(2, 2), 3, 2);
    CHECK(small.ok);
    CHECK(small.system_states == 64);
    CHECK(small.decodes == 64 * 3 * 3);
    CHECK(exhaustive_codec_check(build_construction_table(3, 3), 4, 3).ok);
    CHECK(exhaustive_codec_check(build_simple_mds_table(2, 2), 3, 2).ok);
    CHECK(exhaustive_codec_check(build_replication_table(2, 2), 3, 2).ok);
  }

  TEST_CASE("the stale decoder is flagged") {
    const auto code = make_code("stale", 3, 2, 2);
    const auto r = exhaustive_codec_check(*code);
    CHECK_FALSE(r.ok);
    REQUIRE(r.violation);
    CHECK(r.violation->reason == ViolationReason::version_too_old);
  }

  TEST_CASE("an undersized table fails the decode check") {
    auto t = build_construction_table(2, 2);
    t.set(VersionSet{2}, 2, Rational(1, 4));
    const auto r = exhaustive_codec_check(t, 3, 2);
    CHECK_FALSE(r.ok);
  }

  TEST_CASE("budget refusal") {
    CHECK(codec_check_cost(3, 2, 2, 3) == doctest::Approx(64.0 * 3 * 3));
    CHECK_THROWS_AS(exhaustive_codec_check(build_construction_table(4, 3), 9, 4), BudgetExceededError);
  }

  TEST_CASE("worst-case cost") {
    CHECK(worst_case_cost(build_construction_table(2, 2)) == Rational(3, 4));
    CHECK(worst_case_cost(build_simple_mds_table(2, 2)) == 1);
    CHECK(worst_case_cost(build_replication_table(3)) == 1);
  }

  TEST_CASE("deterministic report") {
    const auto a = render_report(exhaustive_codec_check(build_construction_table(2, 2), 3, 2));
    const auto b = render_report(exhaustive_codec_check(build_construction_table(2, 2), 3, 2));
    CHECK(a == b);
  }
}

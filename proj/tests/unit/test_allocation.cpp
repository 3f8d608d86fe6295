#include "mvc/allocation.hpp"
#include "mvc/errors.hpp"
#include "mvc/table_io.hpp"
#include "mvc/verifier.hpp"

#include <doctest.h>

#include <fstream>

using namespace mvc;

namespace {

Rational q(int p, int d) { return Rational(p, d); }

// (2t-1)/(tc) with t = ceil((c-1)/2) + 1 = floor(c/2) + 1
Rational two_version_alpha(int c) {
  const int t = c / 2 + 1;
  return Rational(2 * t - 1, t * c);
}

}  // namespace

TEST_SUITE("allocation") {
  TEST_CASE("version sets") {
    const VersionSet s{1, 3};
    CHECK(s.contains(1));
    CHECK_FALSE(s.contains(2));
    CHECK(s.latest() == 3);
    CHECK(s.size() == 2);
    CHECK(s.to_string() == "{1,3}");
    CHECK(VersionSet{}.to_string() == "{}");
    CHECK_THROWS_AS(VersionSet{}.latest(), PreconditionError);
    CHECK(nonempty_subsets(3).size() == 7);
    CHECK(nonempty_subsets(3)[2] == VersionSet({1, 2}));
    CHECK(latest_common_version({VersionSet{1, 2}, VersionSet{2, 3}}) == 2);
    CHECK(latest_common_version({VersionSet{1}, VersionSet{2}}) == 0);
  }

  TEST_CASE("t parameter") {
    CHECK(compute_t(7, 3) == 3);
    CHECK(compute_t(2, 2) == 2);
    CHECK(compute_t(8, 5) == 2);
  }

  TEST_CASE("construction cost") {
    CHECK(construction_alpha(2, 2) == q(3, 4));
    CHECK(construction_alpha(5, 3) == q(7, 15));
    CHECK(construction_alpha(7, 3) == q(1, 3));
    for (int c = 1; c <= 12; ++c) CHECK(construction_alpha(c, 1) == q(1, c));
    for (int c = 1; c <= 30; ++c) CHECK(construction_alpha(c, 2) == two_version_alpha(c));
    for (int nu = 1; nu <= 6; ++nu)
      for (int c = 1; c <= 40; ++c)
        if ((c - 1) % nu == 0) CHECK(construction_alpha(c, nu) == q(nu, c + nu - 1));
  }

  TEST_CASE("two-version table, c = 2") {
    const auto t = build_construction_table(2, 2);
    CHECK(t.at(VersionSet{1, 2}, 1) == q(1, 4));
    CHECK(t.at(VersionSet{1, 2}, 2) == q(1, 2));
    CHECK(t.at(VersionSet{1}, 1) == q(3, 4));
    CHECK(t.at(VersionSet{2}, 2) == q(1, 2));
    CHECK(t.at(VersionSet{2}, 1) == 0);
    CHECK(t.alpha() == q(3, 4));
  }

  TEST_CASE("three-version table, c = 7, stores only the latest") {
    const auto t = build_construction_table(7, 3);
    for (VersionSet s : t.states())
      for (int v : s.members()) CHECK(t.at(s, v) == (v == s.latest() ? q(1, 3) : q(0, 1)));
  }

  TEST_CASE("three-version table, c = 5") {
    const auto t = build_construction_table(5, 3);
    CHECK(t.at(VersionSet{1}, 1) == q(7, 15));
    CHECK(t.at(VersionSet{1, 3}, 1) == q(2, 15));
    CHECK(t.at(VersionSet{1, 3}, 3) == q(1, 3));
    CHECK(t.at(VersionSet{2, 3}, 2) == 0);
    CHECK(t.at(VersionSet{2, 3}, 3) == q(1, 3));
    CHECK(t.at(VersionSet{1, 2, 3}, 1) == q(2, 15));
    CHECK(t.at(VersionSet{1, 2}, 2) == q(1, 3));
  }

  TEST_CASE("replication and simple MDS tables") {
    const auto r = build_replication_table(2);
    CHECK(r.at(VersionSet{1, 2}, 2) == 1);
    CHECK(r.at(VersionSet{1, 2}, 1) == 0);
    CHECK(build_replication_table(1).at(VersionSet{1}, 1) == 1);
    const auto m = build_simple_mds_table(2, 2);
    CHECK(m.at(VersionSet{1, 2}, 1) == q(1, 2));
    CHECK(m.at(VersionSet{1, 2}, 2) == q(1, 2));
    CHECK(m.alpha() == 1);
    CHECK(build_simple_mds_table(3, 1).alpha() == q(1, 3));
    for (int c = 1; c <= 4; ++c)
      for (int nu = 1; nu <= 3; ++nu) {
        CHECK_FALSE(feasibility_check(build_replication_table(nu, c), c));
        CHECK_FALSE(feasibility_check(build_simple_mds_table(c, nu), c));
        CHECK_FALSE(feasibility_check(build_construction_table(c, nu), c));
      }
  }

  TEST_CASE("baseline") {
    CHECK(min_baseline(2, 5) == 1);
    CHECK(min_baseline(10, 5) == q(1, 2));
  }

  TEST_CASE("validation rejects overfull states") {
    AllocationTable t(2, 2);
    t.set_alpha(q(1, 2));
    t.set(VersionSet{1}, 1, q(3, 4));
    CHECK_THROWS_AS(t.validate(), PreconditionError);
    CHECK_THROWS_AS(t.set(VersionSet{1}, 2, q(1, 4)), PreconditionError);
  }

  TEST_CASE("machine formats re-parse losslessly") {
    for (int c = 1; c <= 6; ++c)
      for (int nu = 1; nu <= 3; ++nu) {
        const auto t = build_construction_table(c, nu);
        CHECK(parse_table_json(render_table_json(t)) == t);
      }
    const auto csv = render_table_csv(build_construction_table(5, 3));
    CHECK(csv.find("\"{1,3}\",1,2/15,0.133333") != std::string::npos);
    CHECK_THROWS_AS(parse_table_json("{"), PreconditionError);
    CHECK_THROWS_AS(load_table_file("/nonexistent/table.json"), PreconditionError);
  }

  TEST_CASE("rationals") {
    CHECK(to_string(q(6, 8)) == "3/4");
    CHECK(to_string(q(4, 2)) == "2");
    CHECK(to_decimal(q(2, 3)) == "0.666667");
    CHECK(parse_rational("7/15") == q(7, 15));
    CHECK(parse_rational("3") == 3);
    CHECK_THROWS(parse_rational("1/0"));
  }
}

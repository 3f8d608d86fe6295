#include "mvc/code.hpp"
#include "mvc/converse_lab.hpp"
#include "mvc/errors.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

using namespace mvc;

namespace {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

long double hp_log2(long double x) {
  return (boost::multiprecision::log(HighFloat(x)) / boost::multiprecision::log(HighFloat(2))).convert_to<long double>();
}

std::vector<Message> values(const AbstractCode& code, std::initializer_list<std::uint64_t> idx) {
  std::vector<Message> w;
  for (auto i : idx) w.push_back(message_from_index(i, code.message_length()));
  return w;
}

std::optional<Message> decode_first(const AbstractCode& code, const SystemState& s, const std::vector<Message>& w) {
  const int c = code.quorum();
  std::vector<int> servers;
  std::vector<VersionSet> states;
  std::vector<Symbol> symbols;
  for (int i = 0; i < c; ++i) {
    std::vector<Message> held;
    for (int v : s[i].members()) held.push_back(w[v - 1]);
    servers.push_back(i);
    states.push_back(s[i]);
    symbols.push_back(code.encode(i, s[i], held));
  }
  return code.decode(servers, states, symbols);
}

}  // namespace

TEST_SUITE("converse_lab") {
  TEST_CASE("bound values") {
    for (int c = 1; c <= 9; ++c) {
      const auto b = theorem2_bound(c, 1, 64);
      CHECK(b.leading == Rational(1, c));
      CHECK(static_cast<double>(b.penalty) == doctest::Approx(static_cast<double>(hp_log2(c) / (c * 64))));
    }
    CHECK(static_cast<double>(theorem2_bound(3, 2, 20).value()) ==
          doctest::Approx(0.5 - static_cast<double>(hp_log2(3)) / 80).epsilon(1e-12));
    CHECK(static_cast<double>(theorem2_bound(3, 2, 20).value()) == doctest::Approx(0.48019).epsilon(1e-5));
    CHECK(static_cast<double>(theorem2_bound(7, 3, 128).value()) == doctest::Approx(0.32365).epsilon(1e-5));
    CHECK(theorem2_bound(5, 3, 64).penalty == general_bound(5, 3, 64).penalty);
    CHECK(theorem2_bound(5, 2, 64).penalty < general_bound(5, 2, 64).penalty);
    CHECK_THROWS_AS(theorem2_bound(0, 2, 64), PreconditionError);
    CHECK_THROWS_AS(theorem2_bound(3, 5, 2), PreconditionError);
  }

  TEST_CASE("log2 of large integers") {
    BigInt big = 1;
    big <<= 200;
    CHECK(static_cast<double>(log2_int(big)) == doctest::Approx(200.0));
    CHECK(static_cast<double>(log2_int(BigInt(2268))) == doctest::Approx(static_cast<double>(hp_log2(2268))));
  }

  TEST_CASE("state pair for two versions") {
    const auto code = make_code("mds", 3, 2, 2);
    const auto same = values(*code, {5, 5});
    const auto p = find_state_pair_nu2(*code, same);
    CHECK(p.a == 1);
    CHECK(p.s1[0] == VersionSet{1});
    CHECK(p.s2[0] == VersionSet({1, 2}));
    CHECK(p.s2[1] == VersionSet{1});

    for (const char* family : {"mds", "construction", "replication"}) {
      const auto code2 = make_code(family, 3, 2, 2);
      const auto w = values(*code2, {1, 2});
      const auto pair = find_state_pair_nu2(*code2, w);
      CHECK(decode_first(*code2, pair.s1, w) == w[0]);
      CHECK(decode_first(*code2, pair.s2, w) == w[1]);
      for (int i = 0; i < 2; ++i)
        if (i != pair.a - 1) CHECK(pair.s1[i] == pair.s2[i]);
      CHECK(pair.s2[pair.a - 1] == VersionSet({1, 2}));
      CHECK(pair.s1[pair.a - 1] == VersionSet{1});
    }
  }

  TEST_CASE("decodable sets") {
    const auto code = make_code("construction", 3, 2, 2);
    const auto w = values(*code, {1, 2});
    const std::vector<VersionSet> one{VersionSet{1, 2}};
    const auto all = decodable_set(*code, one, VersionSet{1, 2}, w);
    for (const auto& m : all) CHECK((m == w[0] || m == w[1]));
    CHECK(all.contains(w[1]));

    const std::vector<VersionSet> full{VersionSet{1, 2}, VersionSet{1}};
    const auto fixed = decodable_set(*code, full, VersionSet{}, w);
    CHECK(fixed.size() == 1);
    CHECK(fixed.contains(w[0]));

    const std::vector<VersionSet> disjoint{VersionSet{1}, VersionSet{2}};
    CHECK(decodable_set(*code, disjoint, VersionSet{}, w).empty());
  }

  TEST_CASE("auxiliary tuple structure") {
    for (const char* family : {"construction", "mds", "replication"}) {
      const auto code = make_code(family, 4, 3, 3);
      const auto w = values(*code, {3, 0, 2});
      const auto aux = aux_vars(*code, w);
      CHECK(aux.y.size() == 2);
      CHECK(aux.z.size() == 3);
      for (std::size_t i = 1; i < aux.a.size(); ++i) CHECK(aux.a[i - 1] <= aux.a[i]);
      auto sorted = aux.pi;
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == std::vector<int>{1, 2, 3});
      // Y slots at or past the last boundary server are never written
      for (int j = aux.a.back(); j <= 2; ++j) CHECK(aux.y[j - 1] == aux_init_symbol());
      CHECK(invert_aux_vars(*code, aux) == w);
    }
  }

  TEST_CASE("one version") {
    const auto code = make_code("construction", 3, 3, 1);
    const auto w = values(*code, {4});
    const auto aux = aux_vars(*code, w);
    CHECK(aux.pi == std::vector<int>{1});
    // the first server alone holds 1/3 of the version
    CHECK(aux.a == std::vector<int>{3});
    CHECK(invert_aux_vars(*code, aux) == w);
  }

  TEST_CASE("states rebuilt from A and Pi") {
    const std::vector<int> a{1, 2, 2};
    const std::vector<int> pi{3, 1, 2};
    const auto s = reconstruct_states(3, a, pi, 3, 3);
    CHECK(s[0] == VersionSet{1, 2});
    CHECK(s[1] == VersionSet{2});
    CHECK(s[2] == VersionSet{2});
  }

  TEST_CASE("exhaustive round trips") {
    struct Case {
      const char* family;
      int c, nu;
      std::uint64_t m, tuples;
    };
    const Case cases[] = {{"construction", 2, 2, 3, 6}, {"construction", 3, 2, 3, 6},  {"construction", 2, 3, 4, 24},
                          {"construction", 3, 3, 4, 24}, {"replication", 2, 2, 3, 6}, {"replication", 3, 2, 4, 12},
                          {"mds", 3, 3, 4, 24},          {"construction", 3, 2, 4, 12}};
    for (const auto& k : cases) {
      const auto code = make_code(k.family, k.c + 1, k.c, k.nu);
      const auto r = bijection_check(*code, k.m);
      INFO(render_report(r));
      CHECK(r.ok());
      CHECK(r.tuples == k.tuples);
      CHECK(r.distinct_images == k.tuples);
    }
  }

  TEST_CASE("the stale decoder breaks the map") {
    for (int nu : {2, 3}) {
      const auto code = make_code("stale", 3, 2, nu);
      const auto r = bijection_check(*code, 4);
      CHECK_FALSE(r.ok());
      CHECK((r.contract_error || !r.injective));
      CHECK(render_report(r).find("contract_error") != std::string::npos);
    }
  }

  TEST_CASE("values must be distinct") {
    const auto code = make_code("construction", 3, 2, 2);
    CHECK_THROWS_AS(aux_vars(*code, values(*code, {1, 1})), PreconditionError);
    CHECK_THROWS_AS(bijection_check(*code, 1000), BudgetExceededError);
  }
}

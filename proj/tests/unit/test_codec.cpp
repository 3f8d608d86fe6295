#include "mvc/allocation.hpp"
#include "mvc/code.hpp"
#include "mvc/errors.hpp"
#include "mvc/mvc_codec.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace mvc;

namespace {

Message random_message(std::mt19937_64& rng, std::size_t length) {
  Message m(length);
  for (auto& x : m) x = static_cast<FieldElement>(rng() & 0xFF);
  return m;
}

std::map<int, Message> held_of(VersionSet s, const std::vector<Message>& w) {
  std::map<int, Message> held;
  for (int v : s.members()) held.emplace(v, w[v - 1]);
  return held;
}

}  // namespace

TEST_SUITE("mvc_codec") {
  TEST_CASE("chunk length is the lcm of the denominators") {
    CHECK(derive_chunk_length(build_construction_table(2, 2)) == 4);
    CHECK(derive_chunk_length(build_construction_table(5, 3)) == 15);
    CHECK(derive_chunk_length(build_replication_table(3)) == 1);
  }

  TEST_CASE("too many servers for the field") {
    CHECK_THROWS_AS(MvcCodec(build_construction_table(5, 3), 20), ConfigurationError);
  }

  TEST_CASE("symbols of the three-server two-version code") {
    MvcCodec codec(build_construction_table(2, 2), 3);
    std::mt19937_64 rng(1);
    const std::vector<Message> w{random_message(rng, 4), random_message(rng, 4)};

    const auto s1 = codec.encode_server(0, VersionSet{1}, held_of(VersionSet{1}, w));
    REQUIRE(s1.chunks.size() == 1);
    CHECK(s1.chunks.at(1).size() == 3);
    CHECK(s1.chunks.at(1).point_ids == std::vector<FieldElement>{0, 1, 2});

    const auto s12 = codec.encode_server(1, VersionSet{1, 2}, held_of(VersionSet{1, 2}, w));
    CHECK(s12.chunks.at(1).size() == 1);
    CHECK(s12.chunks.at(2).size() == 2);
    CHECK(s12.chunks.at(2).point_ids == std::vector<FieldElement>{4, 5});
    CHECK(codec.storage_bits(s12) == 24);

    const auto empty = codec.encode_server(2, VersionSet{}, {});
    CHECK(empty.chunks.empty());
    CHECK(codec.storage_bits(empty) == 0);

    MvcCodec replication(build_replication_table(2, 2), 3);
    const Message one{0x5A};
    CHECK(replication.storage_bits(replication.encode_server(0, VersionSet{1}, {{1, one}})) == 8);
  }

  TEST_CASE("arrival of the second version trims the first") {
    MvcCodec codec(build_construction_table(2, 2), 3);
    std::mt19937_64 rng(2);
    const std::vector<Message> w{random_message(rng, 4), random_message(rng, 4)};
    const auto before = codec.encode_server(0, VersionSet{1}, held_of(VersionSet{1}, w));
    const auto after = codec.apply_arrival(before, 2, w[1]);
    CHECK(after.chunks.at(1).size() == 1);
    CHECK(after.chunks.at(2).size() == 2);
    CHECK(after == codec.encode_server(0, VersionSet{1, 2}, held_of(VersionSet{1, 2}, w)));
    CHECK(codec.apply_arrival(after, 2, w[1]) == after);
  }

  TEST_CASE("final symbol is independent of arrival order") {
    struct Case {
      AllocationTable table;
      int n;
    };
    const std::vector<Case> cases{{build_construction_table(5, 3), 5},
                                  {build_construction_table(2, 3), 3},
                                  {build_simple_mds_table(3, 3), 4},
                                  {build_replication_table(3, 2), 3}};
    std::mt19937_64 rng(3);
    for (const auto& [table, n] : cases) {
      MvcCodec codec(table, n);
      const auto len = static_cast<std::size_t>(codec.chunk_length());
      const std::vector<Message> w{random_message(rng, len), random_message(rng, len), random_message(rng, len)};
      for (int server = 0; server < n; ++server) {
        for (VersionSet target : nonempty_subsets(3)) {
          auto order = target.members();
          do {
            auto sym = codec.encode_server(server, VersionSet{}, {});
            for (int v : order) sym = codec.apply_arrival(sym, v, w[v - 1]);
            REQUIRE(sym == codec.encode_server(server, target, held_of(target, w)));
          } while (std::next_permutation(order.begin(), order.end()));
        }
      }
    }
  }

  TEST_CASE("growing allocation is not causal") {
    AllocationTable t(2, 2, TableFamily::custom);
    t.set_alpha(1);
    t.set(VersionSet{1}, 1, Rational(1, 2));
    t.set(VersionSet{2}, 2, 1);
    t.set(VersionSet{1, 2}, 1, 1);
    t.set(VersionSet{1, 2}, 2, 0);
    MvcCodec codec(t, 2);
    const Message m(codec.chunk_length(), 1);
    const auto sym = codec.encode_server(0, VersionSet{1}, {{1, m}});
    CHECK_THROWS_AS(codec.apply_arrival(sym, 2, m), ContractError);
  }

  TEST_CASE("decoding the three-server scenarios") {
    MvcCodec codec(build_construction_table(2, 2), 3);
    std::mt19937_64 rng(4);
    const std::vector<Message> w{random_message(rng, 4), random_message(rng, 4)};
    const auto a = codec.encode_server(0, VersionSet{1, 2}, held_of(VersionSet{1, 2}, w));
    const auto b = codec.encode_server(1, VersionSet{1, 2}, held_of(VersionSet{1, 2}, w));
    const auto c = codec.encode_server(2, VersionSet{1}, held_of(VersionSet{1}, w));

    const std::vector<StoredSymbol> both{a, b};
    auto r = codec.decode(both);
    CHECK(r.version == 2);
    CHECK(r.value == w[1]);

    const std::vector<StoredSymbol> mixed{a, c};
    r = codec.decode(mixed);
    CHECK(r.version == 1);
    CHECK(r.value == w[0]);

    const std::vector<StoredSymbol> empty{codec.encode_server(0, VersionSet{}, {}),
                                          codec.encode_server(1, VersionSet{}, {})};
    CHECK_FALSE(codec.decode(empty).version);

    const std::vector<StoredSymbol> one{a};
    CHECK_THROWS_AS(codec.decode(one), PreconditionError);
  }

  TEST_CASE("serialization round trip") {
    MvcCodec codec(build_construction_table(5, 3), 6);
    std::mt19937_64 rng(5);
    const auto len = static_cast<std::size_t>(codec.chunk_length());
    const std::vector<Message> w{random_message(rng, len), random_message(rng, len), random_message(rng, len)};
    for (int server = 0; server < 6; ++server)
      for (VersionSet s : all_subsets(3)) {
        const auto sym = codec.encode_server(server, s, held_of(s, w));
        CHECK(codec.deserialize(server, codec.serialize(sym)) == sym);
      }
    const std::vector<std::uint8_t> junk{3, 0};
    CHECK_THROWS_AS(codec.deserialize(0, junk), PreconditionError);
  }

  TEST_CASE("message index encoding keeps order") {
    CHECK(message_index(message_from_index(258, 3)) == 258);
    CHECK(message_from_index(1, 2) < message_from_index(256, 2));
  }

  TEST_CASE("stale decoder answers with an old version") {
    const auto code = make_code("stale", 3, 2, 2);
    const std::vector<Message> w{message_from_index(1, code->message_length()),
                                 message_from_index(2, code->message_length())};
    const std::vector<int> servers{0, 1};
    const std::vector<VersionSet> states{VersionSet{1, 2}, VersionSet{1, 2}};
    const std::vector<Symbol> symbols{code->encode(0, states[0], w), code->encode(1, states[1], w)};
    CHECK(code->decode(servers, states, symbols) == w[0]);
    CHECK_THROWS(make_code("nope", 3, 2, 2));
  }
}

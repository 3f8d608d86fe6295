#pragma once

#include "mvc/allocation.hpp"
#include "mvc/field_math.hpp"
#include "mvc/version_set.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace mvc {

// One version's value as L field symbols, most significant first, so that
// lexicographic order equals integer order on [M].
using Message = std::vector<FieldElement>;

Message message_from_index(std::uint64_t index, std::size_t length);
std::uint64_t message_index(const Message& message);  // PreconditionError past 64 bits

struct StoredSymbol {
  int server_id = 0;
  VersionSet state;
  std::map<int, EvalCodeword> chunks;  // version -> prefix of the server's point range
  std::optional<int> timestamp;

  bool operator==(const StoredSymbol&) const = default;
};

struct DecodeResult {
  std::optional<int> version;  // empty for Null
  Message value;

  bool is_null() const noexcept { return !version.has_value(); }
  static DecodeResult null() { return {}; }
};

// L = lcm of every allocation's denominator (and of alpha's).
std::int64_t derive_chunk_length(const AllocationTable& table);

// The first `count` evaluations of `message` at server `server`'s reserved
// points [server*L, server*L + count).
EvalCodeword encode_chunk(const Message& message, int server, std::int64_t count, std::int64_t length,
                          const GaloisField& field);

// Executable separate-coding multi-version code built from an allocation table.
class MvcCodec {
 public:
  MvcCodec(AllocationTable table, int n, const GaloisField& field = GaloisField::gf256());

  const AllocationTable& table() const noexcept { return table_; }
  const GaloisField& field() const noexcept { return *field_; }
  int n_servers() const noexcept { return n_; }
  int quorum() const noexcept { return table_.quorum(); }
  int n_versions() const noexcept { return table_.n_versions(); }
  std::int64_t chunk_length() const noexcept { return length_; }

  // alpha_v^(S) * L
  std::int64_t chunk_size(VersionSet state, int v) const;

  StoredSymbol encode_server(int server, VersionSet state, const std::map<int, Message>& held) const;
  StoredSymbol apply_arrival(const StoredSymbol& symbol, int version, const Message& value) const;

  // Exactly quorum() symbols. Null iff the states share no version.
  DecodeResult decode(std::span<const StoredSymbol> symbols) const;

  std::size_t storage_bits(const StoredSymbol& symbol) const;

  // [nu:1][state mask:2 BE] then per chunk [version:1][length:2 BE][payload].
  std::vector<std::uint8_t> serialize(const StoredSymbol& symbol) const;
  StoredSymbol deserialize(int server, std::span<const std::uint8_t> bytes) const;

 private:
  void check_server(int server) const;
  void check_message(const Message& m) const;

  AllocationTable table_;
  int n_;
  const GaloisField* field_;
  std::int64_t length_;
};

}  // namespace mvc

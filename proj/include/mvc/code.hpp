#pragma once

#include "mvc/mvc_codec.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mvc {

// An encoded server symbol, element of [q] as raw bytes.
using Symbol = std::vector<std::uint8_t>;

// Encoder/decoder oracle pair of an (n, c, nu, M, q) multi-version code.
class AbstractCode {
 public:
  virtual ~AbstractCode() = default;

  virtual std::string name() const = 0;
  virtual int n_servers() const = 0;
  virtual int quorum() const = 0;
  virtual int n_versions() const = 0;
  // Symbols per message; values of [M] are Messages of this length.
  virtual std::size_t message_length() const = 0;

  // held[k] is the value of the k-th smallest version of `state`.
  virtual Symbol encode(int server, VersionSet state, std::span<const Message> held) const = 0;

  // servers, states and symbols are parallel, quorum() long. Empty for Null.
  virtual std::optional<Message> decode(std::span<const int> servers, std::span<const VersionSet> states,
                                        std::span<const Symbol> symbols) const = 0;
};

// Adapter running an MvcCodec behind the oracle interface.
class TableCode : public AbstractCode {
 public:
  TableCode(AllocationTable table, int n, std::string name = {});

  std::string name() const override { return name_; }
  int n_servers() const override { return codec_.n_servers(); }
  int quorum() const override { return codec_.quorum(); }
  int n_versions() const override { return codec_.n_versions(); }
  std::size_t message_length() const override { return static_cast<std::size_t>(codec_.chunk_length()); }

  Symbol encode(int server, VersionSet state, std::span<const Message> held) const override;
  std::optional<Message> decode(std::span<const int> servers, std::span<const VersionSet> states,
                                std::span<const Symbol> symbols) const override;

  const MvcCodec& codec() const noexcept { return codec_; }

 private:
  MvcCodec codec_;
  std::string name_;
};

// Fault injection: simple MDS storage whose decoder answers with Version 1
// whenever every queried state holds it, even if a later version is common.
class StaleDecoderCode : public TableCode {
 public:
  StaleDecoderCode(int n, int c, int nu);

  std::optional<Message> decode(std::span<const int> servers, std::span<const VersionSet> states,
                                std::span<const Symbol> symbols) const override;
};

// family is "construction", "replication", "mds" or "stale" (fault-injected).
std::unique_ptr<AbstractCode> make_code(const std::string& family, int n, int c, int nu);

}  // namespace mvc

#include "mvc/mvc_codec.hpp"

#include "mvc/errors.hpp"

#include <string>

namespace mvc {

Message message_from_index(std::uint64_t index, std::size_t length) {
  Message m(length, 0);
  for (std::size_t i = length; i-- > 0 && index != 0;) {
    m[i] = static_cast<FieldElement>(index & 0xFF);
    index >>= 8;
  }
  if (index != 0) throw PreconditionError("message index does not fit in " + std::to_string(length) + " bytes");
  return m;
}

std::uint64_t message_index(const Message& message) {
  std::uint64_t out = 0;
  for (FieldElement b : message) {
    if (out >> 56) throw PreconditionError("message value exceeds 64 bits");
    out = (out << 8) | b;
  }
  return out;
}

std::int64_t derive_chunk_length(const AllocationTable& table) {
  BigInt l = denominator_of(table.alpha());
  for (VersionSet s : table.states())
    for (int v : s.members()) l = lcm(l, denominator_of(table.at(s, v)));
  if (l > 256) throw ConfigurationError("chunk length " + l.str() + " exceeds the 256-point field");
  return l.convert_to<std::int64_t>();
}

EvalCodeword encode_chunk(const Message& message, int server, std::int64_t count, std::int64_t length,
                          const GaloisField& field) {
  std::vector<FieldElement> points(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) points[k] = static_cast<FieldElement>(server * length + k);
  return eval_encode(message, points, field);
}

MvcCodec::MvcCodec(AllocationTable table, int n, const GaloisField& field)
    : table_(std::move(table)), n_(n), field_(&field), length_(derive_chunk_length(table_)) {
  table_.validate();
  if (n < 1) throw PreconditionError("server count must be positive");
  if (table_.quorum() > n) throw PreconditionError("quorum exceeds the number of servers");
  if (static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(length_) > field.size()) {
    throw ConfigurationError("n*L = " + std::to_string(n) + "*" + std::to_string(length_) + " exceeds the " +
                             std::to_string(field.size()) +
                             " evaluation points of the field; use smaller (n, c, nu)");
  }
}

void MvcCodec::check_server(int server) const {
  if (server < 0 || server >= n_) throw PreconditionError("server index out of range: " + std::to_string(server));
}

void MvcCodec::check_message(const Message& m) const {
  if (static_cast<std::int64_t>(m.size()) != length_) {
    throw PreconditionError("message holds " + std::to_string(m.size()) + " symbols, expected " +
                            std::to_string(length_));
  }
  for (FieldElement e : m)
    if (!field_->contains(e)) throw PreconditionError("message symbol outside the field");
}

std::int64_t MvcCodec::chunk_size(VersionSet state, int v) const {
  const Rational scaled = table_.at(state, v) * length_;
  // integral because L clears every denominator
  return numerator_of(scaled).convert_to<std::int64_t>();
}

StoredSymbol MvcCodec::encode_server(int server, VersionSet state, const std::map<int, Message>& held) const {
  check_server(server);
  if (!state.subset_of(VersionSet::full(n_versions()))) throw PreconditionError("state outside [nu]");
  if (static_cast<int>(held.size()) != state.size()) {
    throw PreconditionError("held values do not match state " + state.to_string());
  }
  StoredSymbol sym;
  sym.server_id = server;
  sym.state = state;
  for (const auto& [v, value] : held) {
    if (!state.contains(v)) throw PreconditionError("held version " + std::to_string(v) + " outside the state");
    check_message(value);
    const std::int64_t count = chunk_size(state, v);
    if (count > 0) sym.chunks.emplace(v, encode_chunk(value, server, count, length_, *field_));
  }
  return sym;
}

StoredSymbol MvcCodec::apply_arrival(const StoredSymbol& symbol, int version, const Message& value) const {
  check_message(value);
  if (version < 1 || version > n_versions()) throw PreconditionError("version out of range");
  if (symbol.state.contains(version)) return symbol;

  StoredSymbol next;
  next.server_id = symbol.server_id;
  next.state = symbol.state.with(version);
  next.timestamp = symbol.timestamp;
  for (const auto& [v, chunk] : symbol.chunks) {
    const auto keep = static_cast<std::size_t>(chunk_size(next.state, v));
    if (keep > chunk.size()) {
      throw ContractError("allocation of version " + std::to_string(v) + " grows from state " +
                          symbol.state.to_string() + " to " + next.state.to_string() +
                          "; the table is not causal");
    }
    if (keep == 0) continue;
    EvalCodeword trimmed;
    trimmed.point_ids.assign(chunk.point_ids.begin(), chunk.point_ids.begin() + keep);
    trimmed.values.assign(chunk.values.begin(), chunk.values.begin() + keep);
    next.chunks.emplace(v, std::move(trimmed));
  }
  // held versions with a zero chunk cannot regain storage either
  for (int v : symbol.state.members()) {
    if (!symbol.chunks.contains(v) && chunk_size(next.state, v) > 0) {
      throw ContractError("allocation of version " + std::to_string(v) + " grows from zero in state " +
                          next.state.to_string() + "; the table is not causal");
    }
  }
  const std::int64_t count = chunk_size(next.state, version);
  if (count > 0) next.chunks.emplace(version, encode_chunk(value, symbol.server_id, count, length_, *field_));
  return next;
}

DecodeResult MvcCodec::decode(std::span<const StoredSymbol> symbols) const {
  if (static_cast<int>(symbols.size()) != quorum()) {
    throw PreconditionError("decode takes exactly c = " + std::to_string(quorum()) + " symbols");
  }
  VersionSet common(0xFFFF);
  for (const auto& s : symbols) common = common & s.state;
  if (common.empty()) return DecodeResult::null();
  const int m = common.latest();

  for (int v = n_versions(); v >= m; --v) {
    std::int64_t available = 0;
    for (const auto& s : symbols) {
      auto it = s.chunks.find(v);
      if (it != s.chunks.end()) available += static_cast<std::int64_t>(it->second.size());
    }
    if (available < length_) continue;
    EvalCodeword pooled;
    for (const auto& s : symbols) {
      auto it = s.chunks.find(v);
      if (it == s.chunks.end()) continue;
      pooled.point_ids.insert(pooled.point_ids.end(), it->second.point_ids.begin(), it->second.point_ids.end());
      pooled.values.insert(pooled.values.end(), it->second.values.begin(), it->second.values.end());
    }
    return DecodeResult{v, interpolate(pooled, static_cast<std::size_t>(length_), *field_)};
  }
  std::string states;
  for (const auto& s : symbols) states += s.state.to_string();
  throw CodeInfeasibleError("no version >= " + std::to_string(m) + " is recoverable from states " + states);
}

std::size_t MvcCodec::storage_bits(const StoredSymbol& symbol) const {
  std::size_t symbols = 0;
  for (const auto& [v, chunk] : symbol.chunks) symbols += chunk.size();
  return symbols * field_->bits();
}

std::vector<std::uint8_t> MvcCodec::serialize(const StoredSymbol& symbol) const {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(n_versions()));
  out.push_back(static_cast<std::uint8_t>(symbol.state.mask() >> 8));
  out.push_back(static_cast<std::uint8_t>(symbol.state.mask() & 0xFF));
  for (const auto& [v, chunk] : symbol.chunks) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(chunk.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(chunk.size() & 0xFF));
    out.insert(out.end(), chunk.values.begin(), chunk.values.end());
  }
  return out;
}

StoredSymbol MvcCodec::deserialize(int server, std::span<const std::uint8_t> bytes) const {
  check_server(server);
  if (bytes.size() < 3) throw PreconditionError("serialized symbol shorter than its header");
  if (bytes[0] != n_versions()) throw PreconditionError("serialized symbol has a different version count");
  StoredSymbol sym;
  sym.server_id = server;
  sym.state = VersionSet(static_cast<std::uint16_t>((bytes[1] << 8) | bytes[2]));
  std::size_t pos = 3;
  while (pos < bytes.size()) {
    if (pos + 3 > bytes.size()) throw PreconditionError("truncated chunk header");
    const int v = bytes[pos];
    const std::size_t len = (std::size_t{bytes[pos + 1]} << 8) | bytes[pos + 2];
    pos += 3;
    if (pos + len > bytes.size()) throw PreconditionError("truncated chunk payload");
    if (!sym.state.contains(v)) throw PreconditionError("chunk for a version outside the state");
    if (static_cast<std::int64_t>(len) > length_) throw PreconditionError("chunk longer than L");
    EvalCodeword cw;
    for (std::size_t k = 0; k < len; ++k) {
      cw.point_ids.push_back(static_cast<FieldElement>(server * length_ + static_cast<std::int64_t>(k)));
      cw.values.push_back(bytes[pos + k]);
    }
    sym.chunks.emplace(v, std::move(cw));
    pos += len;
  }
  return sym;
}

}  // namespace mvc

#include "mvc/code.hpp"

#include "mvc/errors.hpp"

namespace mvc {

TableCode::TableCode(AllocationTable table, int n, std::string name)
    : codec_(std::move(table), n), name_(name.empty() ? to_string(codec_.table().family()) : std::move(name)) {}

Symbol TableCode::encode(int server, VersionSet state, std::span<const Message> held) const {
  const auto versions = state.members();
  if (versions.size() != held.size()) throw PreconditionError("held values do not match state " + state.to_string());
  std::map<int, Message> by_version;
  for (std::size_t k = 0; k < versions.size(); ++k) by_version.emplace(versions[k], held[k]);
  return codec_.serialize(codec_.encode_server(server, state, by_version));
}

std::optional<Message> TableCode::decode(std::span<const int> servers, std::span<const VersionSet> states,
                                         std::span<const Symbol> symbols) const {
  if (servers.size() != symbols.size() || states.size() != symbols.size()) {
    throw PreconditionError("decode arguments differ in length");
  }
  std::vector<StoredSymbol> parsed;
  parsed.reserve(symbols.size());
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    parsed.push_back(codec_.deserialize(servers[k], symbols[k]));
    if (parsed.back().state != states[k]) throw PreconditionError("symbol state disagrees with the system state");
  }
  DecodeResult r = codec_.decode(parsed);
  if (r.is_null()) return std::nullopt;
  return std::move(r.value);
}

StaleDecoderCode::StaleDecoderCode(int n, int c, int nu) : TableCode(build_simple_mds_table(c, nu), n, "stale") {}

std::optional<Message> StaleDecoderCode::decode(std::span<const int> servers, std::span<const VersionSet> states,
                                                std::span<const Symbol> symbols) const {
  VersionSet common(0xFFFF);
  for (VersionSet s : states) common = common & s;
  if (common.empty() || !common.contains(1) || common.latest() < 2) {
    return TableCode::decode(servers, states, symbols);
  }
  // every server holds 1/c of Version 1, so the c chunks rebuild it
  EvalCodeword pooled;
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    const StoredSymbol s = codec().deserialize(servers[k], symbols[k]);
    const auto& chunk = s.chunks.at(1);
    pooled.point_ids.insert(pooled.point_ids.end(), chunk.point_ids.begin(), chunk.point_ids.end());
    pooled.values.insert(pooled.values.end(), chunk.values.begin(), chunk.values.end());
  }
  return interpolate(pooled, message_length(), codec().field());
}

std::unique_ptr<AbstractCode> make_code(const std::string& family, int n, int c, int nu) {
  if (family == "stale") return std::make_unique<StaleDecoderCode>(n, c, nu);
  return std::make_unique<TableCode>(build_table(parse_family(family), c, nu), n);
}

}  // namespace mvc

#include "mvc/version_set.hpp"

#include "mvc/errors.hpp"

#include <bit>

namespace mvc {

namespace {

void check_version(int v) {
  if (v < 1 || v > kMaxVersions) throw PreconditionError("version index out of range: " + std::to_string(v));
}

}  // namespace

VersionSet::VersionSet(std::initializer_list<int> versions) {
  for (int v : versions) {
    check_version(v);
    mask_ |= static_cast<std::uint16_t>(1u << (v - 1));
  }
}

VersionSet VersionSet::full(int nu) {
  if (nu < 0 || nu > kMaxVersions) throw PreconditionError("version count out of range");
  return VersionSet(static_cast<std::uint16_t>((1u << nu) - 1));
}

VersionSet VersionSet::single(int v) {
  check_version(v);
  return VersionSet(static_cast<std::uint16_t>(1u << (v - 1)));
}

int VersionSet::size() const noexcept { return std::popcount(mask_); }

int VersionSet::latest() const {
  if (mask_ == 0) throw PreconditionError("latest version of an empty state");
  return std::bit_width(mask_);
}

std::vector<int> VersionSet::members() const {
  std::vector<int> out;
  for (int v = 1; v <= kMaxVersions; ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

VersionSet VersionSet::with(int v) const { return *this | single(v); }

VersionSet VersionSet::without(int v) const {
  check_version(v);
  return VersionSet(static_cast<std::uint16_t>(mask_ & ~(1u << (v - 1))));
}

std::string VersionSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int v : members()) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  }
  return out + "}";
}

std::vector<VersionSet> all_subsets(int nu) {
  const auto full_mask = VersionSet::full(nu).mask();
  std::vector<VersionSet> out;
  out.reserve(std::size_t{full_mask} + 1);
  for (unsigned m = 0; m <= full_mask; ++m) out.emplace_back(static_cast<std::uint16_t>(m));
  return out;
}

std::vector<VersionSet> nonempty_subsets(int nu) {
  auto out = all_subsets(nu);
  out.erase(out.begin());
  return out;
}

VersionSet intersect_all(const std::vector<VersionSet>& states) {
  VersionSet acc(0xFFFF);
  for (VersionSet s : states) acc = acc & s;
  return acc;
}

int latest_common_version(const std::vector<VersionSet>& states) {
  if (states.empty()) return 0;
  const VersionSet common = intersect_all(states);
  return common.empty() ? 0 : common.latest();
}

}  // namespace mvc

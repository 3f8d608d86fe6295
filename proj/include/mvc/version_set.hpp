#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace mvc {

inline constexpr int kMaxVersions = 16;

// Subset of [nu] as a bitmask; version v lives in bit v-1.
class VersionSet {
 public:
  constexpr VersionSet() = default;
  constexpr explicit VersionSet(std::uint16_t mask) : mask_(mask) {}
  VersionSet(std::initializer_list<int> versions);

  static VersionSet full(int nu);
  static VersionSet single(int v);

  constexpr std::uint16_t mask() const noexcept { return mask_; }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  constexpr bool contains(int v) const noexcept {
    return v >= 1 && v <= kMaxVersions && ((mask_ >> (v - 1)) & 1u) != 0;
  }
  int size() const noexcept;
  // max(S); throws PreconditionError on the empty set.
  int latest() const;
  std::vector<int> members() const;

  VersionSet with(int v) const;
  VersionSet without(int v) const;
  VersionSet operator&(VersionSet o) const noexcept { return VersionSet(mask_ & o.mask_); }
  VersionSet operator|(VersionSet o) const noexcept { return VersionSet(mask_ | o.mask_); }
  VersionSet operator-(VersionSet o) const noexcept { return VersionSet(mask_ & ~o.mask_); }
  bool subset_of(VersionSet o) const noexcept { return (mask_ & ~o.mask_) == 0; }

  // "{1,2}", "{}" for the empty set.
  std::string to_string() const;

  friend constexpr bool operator==(VersionSet a, VersionSet b) noexcept { return a.mask_ == b.mask_; }
  friend constexpr auto operator<=>(VersionSet a, VersionSet b) noexcept { return a.mask_ <=> b.mask_; }

 private:
  std::uint16_t mask_ = 0;
};

// Every subset of [nu] in mask order, empty set first.
std::vector<VersionSet> all_subsets(int nu);
// Every nonempty subset of [nu] in mask order. For nu <= 3 this is also the
// group order {1},{2},{1,2},{3},{1,3},{2,3},{1,2,3}.
std::vector<VersionSet> nonempty_subsets(int nu);

// Intersection of all states; the full mask for an empty list.
VersionSet intersect_all(const std::vector<VersionSet>& states);

// max of the intersection, or 0 when it is empty.
int latest_common_version(const std::vector<VersionSet>& states);

}  // namespace mvc

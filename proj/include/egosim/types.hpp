#pragma once

#include <compare>
#include <cstdint>

namespace egosim {

using EntityId = std::uint32_t;

// Unordered entity pair in canonical orientation (lo < hi for proper pairs).
// Ordering is lexicographic on (lo, hi), which is the canonical pair order
// used everywhere: snapshot layout, TSV emission, tie-breaking.
struct PairKey {
  EntityId lo = 0;
  EntityId hi = 0;

  PairKey() = default;
  PairKey(EntityId a, EntityId b) : lo(a < b ? a : b), hi(a < b ? b : a) {}

  std::uint64_t packed() const {
    return (std::uint64_t(lo) << 32) | std::uint64_t(hi);
  }
  static PairKey from_packed(std::uint64_t p) {
    PairKey k;
    k.lo = EntityId(p >> 32);
    k.hi = EntityId(p & 0xffffffffu);
    return k;
  }

  friend bool operator==(const PairKey&, const PairKey&) = default;
  friend std::strong_ordering operator<=>(const PairKey&,
                                          const PairKey&) = default;
};

}  // namespace egosim

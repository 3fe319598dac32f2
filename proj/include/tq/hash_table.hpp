#pragma once

/**
 * Open-addressing hash table for join build sides: linear probing, power-of-
 * two capacity, at most 50% full, one 8-byte slot per entry (4-byte key +
 * 4-byte payload). Slot index comes from Fibonacci multiplicative hashing,
 * taking the high bits of key * 2654435769.
 */

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "tq/block_ops.hpp"
#include "tq/common.hpp"
#include "tq/tile.hpp"

namespace tq {

class HashTable {
 public:
  static constexpr i32 kEmptyKey = std::numeric_limits<i32>::min();
  static constexpr u32 kFibonacci = 2654435769u;

  // capacity: power of two, >= 2, and >= 2 * keys.size(). Duplicate keys and
  // keys equal to the empty sentinel are build errors. workers > 1 builds
  // with per-slot compare-and-swap claims.
  static HashTable build(std::span<const i32> keys, std::span<const i32> payloads,
                         i64 capacity, int workers = 1);

  i64 capacity() const { return static_cast<i64>(keys_.size()); }
  i64 size() const { return size_; }

  u32 slot_of(i32 key) const {
    return (static_cast<u32>(key) * kFibonacci) >> shift_;
  }

  // Linear probe from slot_of(key); stops at the key or the first empty slot.
  // Never wraps more than once (the table is at most half full).
  std::optional<i32> probe(i32 key) const {
    if (key == kEmptyKey) return std::nullopt;  // unstorable, aliases empty slots
    const u32 mask = static_cast<u32>(keys_.size() - 1);
    u32 s = slot_of(key);
    for (i64 step = 0; step <= mask; ++step, s = (s + 1) & mask) {
      i32 k = keys_[s];
      if (k == key) return payloads_[s];
      if (k == kEmptyKey) return std::nullopt;
    }
    return std::nullopt;
  }

  const i32* slot_keys() const { return keys_.data(); }
  const i32* slot_payloads() const { return payloads_.data(); }

 private:
  HashTable(i64 capacity, int shift) : keys_(capacity, kEmptyKey), payloads_(capacity, 0), shift_(shift) {}

  std::vector<i32> keys_;
  std::vector<i32> payloads_;
  int shift_;
  i64 size_ = 0;
};

// Probes every valid (and, when mask is given, flagged) slot of the keys
// tile. found[i] is set on a hit and payloads[i] receives the match payload;
// slots that miss or were not probed keep found[i] false.
inline void block_lookup(const Tile<i32>& keys, const HashTable& table,
                         Tile<i32>& payloads, BlockBitmap& found,
                         const BlockBitmap* mask = nullptr) {
  TQ_CHECK(payloads.capacity() == keys.capacity(), "block_lookup: tile size mismatch");
  TQ_CHECK(found.size() == keys.capacity(), "block_lookup: bitmap size mismatch");
  if (mask != nullptr) {
    TQ_CHECK(mask->size() == keys.capacity(), "block_lookup: mask size mismatch");
  }
  payloads.poison();
  found.clear();
  const i64 n = keys.valid_count();
  for (i64 i = 0; i < n; ++i) {
    if (mask != nullptr && !mask->test(i)) continue;
    if (auto hit = table.probe(keys[i])) {
      payloads[i] = *hit;
      found.set(i, true);
    }
  }
  payloads.set_valid_count(n);
}

}  // namespace tq

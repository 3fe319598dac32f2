#include "tq/hash_table.hpp"

#include <atomic>
#include <bit>

#include "tq/kernel.hpp"

namespace tq {

namespace {

int shift_for_capacity(i64 capacity) {
  TQ_CONFIG_CHECK(capacity >= 2 && std::has_single_bit(static_cast<u64>(capacity)),
                  "HashTable: capacity must be a power of two >= 2");
  return 32 - std::countr_zero(static_cast<u64>(capacity));
}

}  // namespace

HashTable HashTable::build(std::span<const i32> keys, std::span<const i32> payloads,
                           i64 capacity, int workers) {
  TQ_CONFIG_CHECK(keys.size() == payloads.size(), "HashTable: key/payload length mismatch");
  const int shift = shift_for_capacity(capacity);
  if (static_cast<i64>(keys.size()) * 2 > capacity) {
    throw BuildError("HashTable: capacity overflow (fill would exceed 50%)");
  }

  HashTable table(capacity, shift);
  const u32 mask = static_cast<u32>(capacity - 1);

  if (workers <= 1) {
    for (size_t i = 0; i < keys.size(); ++i) {
      const i32 key = keys[i];
      if (key == kEmptyKey) throw BuildError("HashTable: key equals empty sentinel");
      u32 s = table.slot_of(key);
      for (;;) {
        i32& slot = table.keys_[s];
        if (slot == kEmptyKey) {
          slot = key;
          table.payloads_[s] = payloads[i];
          break;
        }
        if (slot == key) throw BuildError("HashTable: duplicate key");
        s = (s + 1) & mask;
      }
    }
    table.size_ = static_cast<i64>(keys.size());
    return table;
  }

  // Parallel build: claim a slot's key with CAS, then write the payload.
  // Publication is safe because probes happen only after build returns.
  std::atomic<bool> duplicate{false};
  std::atomic<bool> sentinel{false};
  const i64 n = static_cast<i64>(keys.size());
  const i64 chunk = (n + workers - 1) / workers;
  parallel_for_blocks((n + chunk - 1) / chunk, workers, [&](i64 b, int) {
    const i64 lo = b * chunk;
    const i64 hi = std::min<i64>(n, lo + chunk);
    for (i64 i = lo; i < hi; ++i) {
      const i32 key = keys[i];
      if (key == kEmptyKey) {
        sentinel.store(true, std::memory_order_relaxed);
        return;
      }
      u32 s = table.slot_of(key);
      for (;;) {
        std::atomic_ref<i32> slot(table.keys_[s]);
        const i32 seen = slot.load(std::memory_order_relaxed);
        if (seen == key) {
          duplicate.store(true, std::memory_order_relaxed);
          return;
        }
        if (seen == kEmptyKey) {
          i32 expected = kEmptyKey;
          if (slot.compare_exchange_strong(expected, key, std::memory_order_acq_rel)) {
            table.payloads_[s] = payloads[i];
            break;
          }
          if (expected == key) {  // lost the race to an equal key
            duplicate.store(true, std::memory_order_relaxed);
            return;
          }
          continue;  // someone claimed this slot with another key; re-inspect
        }
        s = (s + 1) & mask;
      }
    }
  });
  if (sentinel.load()) throw BuildError("HashTable: key equals empty sentinel");
  if (duplicate.load()) throw BuildError("HashTable: duplicate key");
  table.size_ = n;
  return table;
}

}  // namespace tq

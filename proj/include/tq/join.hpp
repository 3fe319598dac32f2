#pragma once

/**
 * Hash-join probe variants. All return the same checksum: the sum over
 * matching probe rows of (build payload + probe payload), accumulated in
 * 8 bytes, so the value is independent of probe order, worker count, and
 * tile shape.
 */

#include <span>

#include "tq/hash_table.hpp"
#include "tq/kernel.hpp"

namespace tq {

inline constexpr int kDefaultPrefetchDistance = 16;

i64 join_probe_scalar(std::span<const i32> probe_keys, std::span<const i32> probe_payloads,
                      const HashTable& table, int workers = 1);

// Same probe loop with an explicit software prefetch of the slot line
// `distance` keys ahead. Results are identical to the scalar variant.
i64 join_probe_prefetch(std::span<const i32> probe_keys,
                        std::span<const i32> probe_payloads, const HashTable& table,
                        int workers = 1, int distance = kDefaultPrefetchDistance);

// Kernel composition: load keys and payloads, block_lookup, sum the found
// pairs with block_aggregate, fold per-block partials into a shared total.
i64 join_probe_tile(std::span<const i32> probe_keys, std::span<const i32> probe_payloads,
                    const HashTable& table, const TileConfig& config = {},
                    int workers = 1);

}  // namespace tq

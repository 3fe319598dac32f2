#include "tq/join.hpp"

#include <atomic>

#include "tq/block_ops.hpp"

namespace tq {

namespace {

i64 probe_range(std::span<const i32> keys, std::span<const i32> payloads,
                const HashTable& table, i64 lo, i64 hi) {
  i64 sum = 0;
  for (i64 i = lo; i < hi; ++i) {
    if (auto hit = table.probe(keys[i])) sum += static_cast<i64>(*hit) + payloads[i];
  }
  return sum;
}

i64 probe_range_prefetch(std::span<const i32> keys, std::span<const i32> payloads,
                         const HashTable& table, i64 lo, i64 hi, int distance) {
  const i32* slot_keys = table.slot_keys();
  i64 sum = 0;
  for (i64 i = lo; i < hi; ++i) {
    if (i + distance < hi) {
      __builtin_prefetch(slot_keys + table.slot_of(keys[i + distance]), 0, 1);
    }
    if (auto hit = table.probe(keys[i])) sum += static_cast<i64>(*hit) + payloads[i];
  }
  return sum;
}

template <typename F>
i64 partitioned_probe(std::span<const i32> keys, std::span<const i32> payloads,
                      int workers, F&& range_fn) {
  TQ_CONFIG_CHECK(keys.size() == payloads.size(), "join probe: key/payload length mismatch");
  TQ_CONFIG_CHECK(workers >= 1, "join probe: workers must be >= 1");
  const i64 n = static_cast<i64>(keys.size());
  if (n == 0) return 0;
  const i64 chunk = (n + workers - 1) / workers;
  const i64 parts = (n + chunk - 1) / chunk;
  std::atomic<i64> total{0};
  parallel_for_blocks(parts, workers, [&](i64 p, int) {
    const i64 lo = p * chunk;
    const i64 hi = std::min<i64>(n, lo + chunk);
    total.fetch_add(range_fn(lo, hi), std::memory_order_relaxed);
  });
  return total.load();
}

}  // namespace

i64 join_probe_scalar(std::span<const i32> probe_keys, std::span<const i32> probe_payloads,
                      const HashTable& table, int workers) {
  return partitioned_probe(probe_keys, probe_payloads, workers, [&](i64 lo, i64 hi) {
    return probe_range(probe_keys, probe_payloads, table, lo, hi);
  });
}

i64 join_probe_prefetch(std::span<const i32> probe_keys,
                        std::span<const i32> probe_payloads, const HashTable& table,
                        int workers, int distance) {
  TQ_CONFIG_CHECK(distance >= 1, "join probe: prefetch distance must be >= 1");
  return partitioned_probe(probe_keys, probe_payloads, workers, [&](i64 lo, i64 hi) {
    return probe_range_prefetch(probe_keys, probe_payloads, table, lo, hi, distance);
  });
}

i64 join_probe_tile(std::span<const i32> probe_keys, std::span<const i32> probe_payloads,
                    const HashTable& table, const TileConfig& config, int workers) {
  TQ_CONFIG_CHECK(probe_keys.size() == probe_payloads.size(),
                  "join probe: key/payload length mismatch");
  config.validate();

  struct Scratch {
    Tile<i32> keys, payloads, hits;
    BlockBitmap found;
    explicit Scratch(const TileConfig& cfg) : keys(cfg), payloads(cfg), hits(cfg), found(cfg) {}
  };
  std::vector<Scratch> scratch;
  scratch.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) scratch.emplace_back(config);

  std::atomic<i64> total{0};
  run_kernel(static_cast<i64>(probe_keys.size()), config, ScheduleMode::kArrivalOrder,
             workers, [&](const BlockContext& ctx) {
               Scratch& s = scratch[static_cast<size_t>(ctx.worker_id)];
               block_load(probe_keys, ctx, s.keys);
               block_load(probe_payloads, ctx, s.payloads);
               block_lookup(s.keys, table, s.hits, s.found);
               const i64 partial = block_aggregate(s.hits, AggKind::SUM, &s.found) +
                                   block_aggregate(s.payloads, AggKind::SUM, &s.found);
               if (partial != 0) total.fetch_add(partial, std::memory_order_relaxed);
             });
  return total.load();
}

}  // namespace tq

#pragma once

/**
 * Selection (filter) variants over a single column.
 *
 *   select_branching    vector-at-a-time scalar loop with a branch per element
 *   select_predicated   branch-free inner loop (unconditional store + index
 *                       increment into an L1-resident staging buffer)
 *   select_per_element  naive shared cursor bumped once per match; kept as the
 *                       baseline the single-kernel variant is measured against
 *   select_tile         one kernel per tile: load, pred, per-thread count,
 *                       scan, cursor allocation, shuffle, store
 *
 * Multi-threaded scalar variants claim output ranges vector-by-vector through
 * a shared cursor, so the output is input-ordered within each claimed range
 * and a permutation of the single-threaded output overall.
 */

#include <atomic>
#include <memory>
#include <span>
#include <vector>

#include "tq/block_ops.hpp"
#include "tq/kernel.hpp"

namespace tq {

inline constexpr i64 kSelectVectorSize = 1024;

namespace detail {

template <typename T, typename F>
i64 select_scalar_run(std::span<const T> in, std::span<T> out, int workers, F&& body) {
  TQ_CONFIG_CHECK(workers >= 1, "select: workers must be >= 1");
  TQ_CHECK(out.size() >= in.size(), "select: output capacity too small");
  const i64 n = static_cast<i64>(in.size());
  std::atomic<i64> cursor{0};
  const i64 chunk = workers == 1 ? n : (n + workers - 1) / workers;
  const i64 parts = chunk == 0 ? 0 : (n + chunk - 1) / chunk;
  parallel_for_blocks(parts, workers, [&](i64 p, int) {
    const i64 lo = p * chunk;
    const i64 hi = std::min<i64>(n, lo + chunk);
    for (i64 v = lo; v < hi; v += kSelectVectorSize) {
      const i64 ve = std::min<i64>(hi, v + kSelectVectorSize);
      body(in.data() + v, ve - v, cursor, out);
    }
  });
  return cursor.load(std::memory_order_relaxed);
}

}  // namespace detail

// Writes matches to out and returns the match count. out must hold at least
// in.size() elements. A sigma=0 predicate performs no output writes.
template <typename T>
i64 select_branching_into(std::span<const T> in, const PredicateSpec<T>& pred,
                          std::span<T> out, int workers = 1) {
  return detail::select_scalar_run<T>(
      in, out, workers,
      [&pred](const T* v, i64 len, std::atomic<i64>& cursor, std::span<T> dest) {
        i64 d = 0;
        for (i64 i = 0; i < len; ++i) {
          if (pred.eval(v[i])) ++d;
        }
        if (d == 0) return;
        i64 base = cursor.fetch_add(d, std::memory_order_relaxed);
        T* o = dest.data() + base;
        for (i64 i = 0; i < len; ++i) {
          if (pred.eval(v[i])) *o++ = v[i];
        }
      });
}

template <typename T>
i64 select_predicated_into(std::span<const T> in, const PredicateSpec<T>& pred,
                           std::span<T> out, int workers = 1) {
  return detail::select_scalar_run<T>(
      in, out, workers,
      [&pred](const T* v, i64 len, std::atomic<i64>& cursor, std::span<T> dest) {
        T buf[kSelectVectorSize];
        i64 d = 0;
        for (i64 i = 0; i < len; ++i) {
          buf[d] = v[i];
          d += pred.eval(v[i]) ? 1 : 0;
        }
        if (d == 0) return;
        i64 base = cursor.fetch_add(d, std::memory_order_relaxed);
        std::memcpy(dest.data() + base, buf, static_cast<size_t>(d) * sizeof(T));
      });
}

template <typename T>
i64 select_per_element_into(std::span<const T> in, const PredicateSpec<T>& pred,
                            std::span<T> out, int workers = 1) {
  return detail::select_scalar_run<T>(
      in, out, workers,
      [&pred](const T* v, i64 len, std::atomic<i64>& cursor, std::span<T> dest) {
        for (i64 i = 0; i < len; ++i) {
          if (pred.eval(v[i])) {
            dest[static_cast<size_t>(cursor.fetch_add(1, std::memory_order_relaxed))] = v[i];
          }
        }
      });
}

template <typename T>
i64 select_tile_into(std::span<const T> in, const PredicateSpec<T>& pred,
                     std::span<T> out, const TileConfig& config,
                     ScheduleMode mode = ScheduleMode::kDeterministic, int workers = 1) {
  config.validate();
  TQ_CHECK(out.size() >= in.size(), "select_tile: output capacity too small");

  struct Scratch {
    Tile<T> loaded;
    Tile<T> compacted;
    BlockBitmap flags;
    explicit Scratch(const TileConfig& cfg) : loaded(cfg), compacted(cfg), flags(cfg) {}
  };
  std::vector<Scratch> scratch;
  scratch.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) scratch.emplace_back(config);

  return run_kernel(static_cast<i64>(in.size()), config, mode, workers,
                    [&](const BlockContext& ctx) {
                      Scratch& s = scratch[static_cast<size_t>(ctx.worker_id)];
                      block_load(in, ctx, s.loaded);
                      block_pred(s.loaded, pred, s.flags);
                      auto counts = block_thread_counts(s.flags, ctx);
                      auto [prefix, total] = block_scan(counts);
                      const i64 base = ctx.allocate(total);
                      block_shuffle(s.loaded, s.flags, prefix, ctx, s.compacted);
                      block_store(s.compacted, out, base);
                    });
}

// Convenience wrappers returning the compacted column.

template <typename T>
std::vector<T> select_branching(std::span<const T> in, const PredicateSpec<T>& pred,
                                int workers = 1) {
  std::vector<T> out(in.size());
  out.resize(static_cast<size_t>(select_branching_into(in, pred, std::span<T>(out), workers)));
  return out;
}

template <typename T>
std::vector<T> select_predicated(std::span<const T> in, const PredicateSpec<T>& pred,
                                 int workers = 1) {
  std::vector<T> out(in.size());
  out.resize(static_cast<size_t>(select_predicated_into(in, pred, std::span<T>(out), workers)));
  return out;
}

template <typename T>
std::vector<T> select_per_element(std::span<const T> in, const PredicateSpec<T>& pred,
                                  int workers = 1) {
  std::vector<T> out(in.size());
  out.resize(static_cast<size_t>(select_per_element_into(in, pred, std::span<T>(out), workers)));
  return out;
}

template <typename T>
std::vector<T> select_tile(std::span<const T> in, const PredicateSpec<T>& pred,
                           const TileConfig& config,
                           ScheduleMode mode = ScheduleMode::kDeterministic,
                           int workers = 1) {
  std::vector<T> out(in.size());
  out.resize(static_cast<size_t>(
      select_tile_into(in, pred, std::span<T>(out), config, mode, workers)));
  return out;
}

}  // namespace tq

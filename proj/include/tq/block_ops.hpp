#pragma once

/**
 * Block-wide primitives. Each operates on one block's tile, with logical
 * thread t owning the strided slots t, t + block_threads, ... Slots that a
 * primitive does not write stay undefined (poisoned in debug builds); later
 * primitives consult the bitmap and never read them.
 */

#include <cstring>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "tq/kernel.hpp"
#include "tq/tile.hpp"

namespace tq {

// Copies the block's slice of a column. The final block gets a partial tile;
// a block whose offset lies past the end gets valid_count 0.
template <typename T>
void block_load(std::span<const T> column, const BlockContext& ctx, Tile<T>& out) {
  TQ_CHECK(out.capacity() == ctx.config.tile_size(), "block_load: tile/config mismatch");
  out.poison();
  const i64 offset = ctx.tile_offset();
  const i64 len = static_cast<i64>(column.size());
  const i64 n = offset >= len ? 0 : std::min<i64>(ctx.config.tile_size(), len - offset);
  if (n > 0) std::memcpy(out.data(), column.data() + offset, static_cast<size_t>(n) * sizeof(T));
  out.set_valid_count(n);
}

// Loads only the slots whose bitmap flag is set; everything else is left
// unwritten so a fully false bitmap touches no source memory.
template <typename T>
void block_load_sel(std::span<const T> column, const BlockBitmap& bitmap,
                    const BlockContext& ctx, Tile<T>& out) {
  TQ_CHECK(out.capacity() == ctx.config.tile_size(), "block_load_sel: tile/config mismatch");
  TQ_CHECK(bitmap.size() == ctx.config.tile_size(), "block_load_sel: bitmap size mismatch");
  out.poison();
  const i64 offset = ctx.tile_offset();
  const i64 len = static_cast<i64>(column.size());
  const i64 n = offset >= len ? 0 : std::min<i64>(ctx.config.tile_size(), len - offset);
  const T* src = column.data() + offset;
  for (i64 i = 0; i < n; ++i) {
    if (bitmap.test(i)) out[i] = src[i];
  }
  out.set_valid_count(n);
}

// Evaluates spec against every valid slot (INIT) or only the already-set ones
// (AND). Flags at and beyond valid_count are always left false.
template <typename T>
void block_pred(const Tile<T>& tile, const PredicateSpec<T>& spec, BlockBitmap& bitmap) {
  TQ_CHECK(bitmap.size() == tile.capacity(), "block_pred: bitmap size mismatch");
  const i64 n = tile.valid_count();
  if (spec.combine == PredCombine::INIT) {
    for (i64 i = 0; i < n; ++i) bitmap.set(i, spec.eval(tile[i]));
    for (i64 i = n; i < bitmap.size(); ++i) bitmap.set(i, false);
  } else {
    for (i64 i = 0; i < n; ++i) {
      if (bitmap.test(i)) bitmap.set(i, spec.eval(tile[i]));
    }
    for (i64 i = n; i < bitmap.size(); ++i) {
      TQ_CHECK(!bitmap.test(i), "block_pred: AND bitmap set beyond valid_count");
    }
  }
}

// Exclusive prefix sum over per-thread counts. Exact for any non-negative
// input whose total fits in 8 bytes.
inline std::pair<std::vector<i64>, i64> block_scan(std::span<const i64> counts) {
  std::vector<i64> prefix(counts.size());
  i64 running = 0;
  for (size_t t = 0; t < counts.size(); ++t) {
    TQ_CHECK(counts[t] >= 0, "block_scan: negative count");
    prefix[t] = running;
    running += counts[t];
  }
  return {std::move(prefix), running};
}

// Per-logical-thread match counts under the strided ownership rule.
inline std::vector<i64> block_thread_counts(const BlockBitmap& bitmap,
                                            const BlockContext& ctx) {
  const int bt = ctx.config.block_threads;
  TQ_CHECK(bitmap.size() == ctx.config.tile_size(), "block_thread_counts: bitmap size mismatch");
  std::vector<i64> counts(static_cast<size_t>(bt), 0);
  for (int t = 0; t < bt; ++t) {
    i64 c = 0;
    for (i64 i = t; i < bitmap.size(); i += bt) c += bitmap.test(i) ? 1 : 0;
    counts[static_cast<size_t>(t)] = c;
  }
  return counts;
}

// Compacts matched elements to the tile front. Thread t writes its matches,
// in stride order, starting at exclusive_prefix[t]; output order is therefore
// thread-major and deterministic.
template <typename T>
void block_shuffle(const Tile<T>& tile, const BlockBitmap& bitmap,
                   std::span<const i64> exclusive_prefix, const BlockContext& ctx,
                   Tile<T>& out) {
  const int bt = ctx.config.block_threads;
  TQ_CHECK(static_cast<int>(exclusive_prefix.size()) == bt,
           "block_shuffle: prefix length != block_threads");
  TQ_CHECK(bitmap.size() == tile.capacity(), "block_shuffle: bitmap size mismatch");
  TQ_CHECK(out.capacity() == ctx.config.tile_size(), "block_shuffle: tile/config mismatch");
  out.poison();
  i64 total = 0;
  for (int t = 0; t < bt; ++t) {
    i64 pos = exclusive_prefix[static_cast<size_t>(t)];
    for (i64 i = t; i < tile.valid_count(); i += bt) {
      if (bitmap.test(i)) {
        out[pos++] = tile[i];
        ++total;
      }
    }
  }
  out.set_valid_count(total);
}

// Writes tile[0 .. valid_count) to dest starting at offset. Bounds-checked.
template <typename T>
void block_store(const Tile<T>& tile, std::span<T> dest, i64 offset) {
  const i64 n = tile.valid_count();
  TQ_CHECK(offset >= 0 && offset + n <= static_cast<i64>(dest.size()),
           "block_store: destination overflow");
  if (n > 0) std::memcpy(dest.data() + offset, tile.data(), static_cast<size_t>(n) * sizeof(T));
}

enum class AggKind { SUM, COUNT, MIN, MAX };

template <typename T>
using AggValue = std::conditional_t<std::is_integral_v<T>, i64, double>;

// Reduces the tile's valid slots (optionally only the bitmap-flagged ones).
// Integer sums accumulate in 8 bytes. Empty inputs yield the identity:
// 0 for SUM/COUNT, +inf/-inf sentinels for MIN/MAX.
template <typename T>
AggValue<T> block_aggregate(const Tile<T>& tile, AggKind kind,
                            const BlockBitmap* mask = nullptr) {
  if (mask != nullptr) {
    TQ_CHECK(mask->size() == tile.capacity(), "block_aggregate: mask size mismatch");
  }
  using Acc = AggValue<T>;
  constexpr Acc kMinIdentity = std::is_integral_v<T>
                                   ? static_cast<Acc>(std::numeric_limits<T>::max())
                                   : std::numeric_limits<Acc>::infinity();
  constexpr Acc kMaxIdentity = std::is_integral_v<T>
                                   ? static_cast<Acc>(std::numeric_limits<T>::lowest())
                                   : -std::numeric_limits<Acc>::infinity();
  Acc sum = 0;
  i64 count = 0;
  Acc mn = kMinIdentity;
  Acc mx = kMaxIdentity;
  for (i64 i = 0; i < tile.valid_count(); ++i) {
    if (mask != nullptr && !mask->test(i)) continue;
    Acc v = static_cast<Acc>(tile[i]);
    sum += v;
    ++count;
    if (v < mn) mn = v;
    if (v > mx) mx = v;
  }
  switch (kind) {
    case AggKind::SUM: return sum;
    case AggKind::COUNT: return static_cast<Acc>(count);
    case AggKind::MIN: return mn;
    case AggKind::MAX: return mx;
  }
  return sum;
}

}  // namespace tq

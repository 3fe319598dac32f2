#pragma once

/**
 * Kernel launcher. A kernel is a function run once per block over
 * ceil(input_length / tile_size) blocks, scheduled across a worker pool.
 *
 * Output allocation goes through a shared GlobalCursor. In deterministic mode
 * offsets are granted strictly in block_id order (count first, then store),
 * so results are bitwise reproducible for any worker count. In arrival_order
 * mode the cursor is a serialized fetch-and-add and results are a permutation
 * of the deterministic ones.
 */

#include <atomic>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <vector>

#include "tq/common.hpp"
#include "tq/tile.hpp"

namespace tq {

enum class ScheduleMode { kDeterministic, kArrivalOrder };

class GlobalCursor {
 public:
  GlobalCursor(ScheduleMode mode, i64 num_blocks);

  // Reserves count output slots for block_id and returns the start offset.
  // At most one allocation per block. Deterministic mode blocks the caller
  // until every lower block has allocated or finished; this cannot deadlock
  // because the pool claims block ids in ascending order, so the lowest
  // unfinished block is always running.
  i64 allocate(i64 block_id, i64 count);

  // Called by the launcher when a block returns. A block that never allocated
  // is sequenced here as a zero-length grant.
  void finish_block(i64 block_id);

  i64 total() const;

 private:
  void advance_locked();

  ScheduleMode mode_;
  i64 num_blocks_;

  std::atomic<i64> arrival_offset_{0};

  std::mutex mu_;
  std::condition_variable cv_;
  i64 next_block_ = 0;
  i64 det_offset_ = 0;
  std::vector<std::uint8_t> sequenced_;  // deterministic mode only
};

struct BlockContext {
  i64 block_id = 0;
  i64 num_blocks = 0;
  TileConfig config;
  int worker_id = 0;
  int num_workers = 1;
  GlobalCursor* cursor = nullptr;

  i64 tile_offset() const { return block_id * config.tile_size(); }
  i64 allocate(i64 count) const { return cursor->allocate(block_id, count); }
};

// Runs fn(block_id, worker_id) for every block id in [0, num_blocks).
// Worker threads claim ids from a shared counter in ascending order. The
// first exception thrown by any block is rethrown after all workers join.
void parallel_for_blocks(i64 num_blocks, int workers,
                         const std::function<void(i64, int)>& fn);

// Returns the cursor total (total output length allocated by the kernel).
template <typename BlockFn>
i64 run_kernel(i64 input_length, const TileConfig& config, ScheduleMode mode,
               int workers, BlockFn&& block_fn) {
  config.validate();
  TQ_CONFIG_CHECK(input_length >= 0, "run_kernel: negative input_length");
  TQ_CONFIG_CHECK(workers >= 1, "run_kernel: workers must be >= 1");

  const i64 tile = config.tile_size();
  const i64 num_blocks = (input_length + tile - 1) / tile;
  GlobalCursor cursor(mode, num_blocks);

  parallel_for_blocks(num_blocks, workers, [&](i64 block_id, int worker_id) {
    BlockContext ctx;
    ctx.block_id = block_id;
    ctx.num_blocks = num_blocks;
    ctx.config = config;
    ctx.worker_id = worker_id;
    ctx.num_workers = workers;
    ctx.cursor = &cursor;
    try {
      block_fn(ctx);
    } catch (...) {
      cursor.finish_block(block_id);  // never strand blocks waiting on the sequencer
      throw;
    }
    cursor.finish_block(block_id);
  });
  return cursor.total();
}

}  // namespace tq

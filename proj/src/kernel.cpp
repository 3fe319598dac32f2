#include "tq/kernel.hpp"

#include <algorithm>
#include <exception>
#include <thread>

namespace tq {

GlobalCursor::GlobalCursor(ScheduleMode mode, i64 num_blocks)
    : mode_(mode), num_blocks_(num_blocks) {
  if (mode_ == ScheduleMode::kDeterministic) {
    sequenced_.assign(static_cast<size_t>(num_blocks_), 0);
  }
}

void GlobalCursor::advance_locked() {
  while (next_block_ < num_blocks_ && sequenced_[static_cast<size_t>(next_block_)]) {
    ++next_block_;
  }
}

i64 GlobalCursor::allocate(i64 block_id, i64 count) {
  TQ_CHECK(count >= 0, "GlobalCursor: negative allocation");
  TQ_CHECK(block_id >= 0 && block_id < num_blocks_, "GlobalCursor: bad block id");

  if (mode_ == ScheduleMode::kArrivalOrder) {
    return arrival_offset_.fetch_add(count, std::memory_order_relaxed);
  }

  std::unique_lock lk(mu_);
  cv_.wait(lk, [&] { return next_block_ == block_id; });
  TQ_CHECK(!sequenced_[static_cast<size_t>(block_id)],
           "GlobalCursor: block allocated twice");
  i64 offset = det_offset_;
  det_offset_ += count;
  sequenced_[static_cast<size_t>(block_id)] = 1;
  advance_locked();
  cv_.notify_all();
  return offset;
}

void GlobalCursor::finish_block(i64 block_id) {
  if (mode_ == ScheduleMode::kArrivalOrder) return;
  std::unique_lock lk(mu_);
  if (!sequenced_[static_cast<size_t>(block_id)]) {
    sequenced_[static_cast<size_t>(block_id)] = 1;
    if (next_block_ == block_id) {
      advance_locked();
      cv_.notify_all();
    }
  }
}

i64 GlobalCursor::total() const {
  return mode_ == ScheduleMode::kArrivalOrder
             ? arrival_offset_.load(std::memory_order_relaxed)
             : det_offset_;
}

void parallel_for_blocks(i64 num_blocks, int workers,
                         const std::function<void(i64, int)>& fn) {
  TQ_CONFIG_CHECK(workers >= 1, "parallel_for_blocks: workers must be >= 1");
  if (num_blocks <= 0) return;

  int pool = static_cast<int>(std::min<i64>(workers, num_blocks));
  if (pool == 1) {
    for (i64 b = 0; b < num_blocks; ++b) fn(b, 0);
    return;
  }

  std::atomic<i64> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker_loop = [&](int worker_id) {
    try {
      for (;;) {
        i64 b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= num_blocks) return;
        fn(b, worker_id);
      }
    } catch (...) {
      std::lock_guard lg(error_mu);
      if (!first_error) first_error = std::current_exception();
      // Drain remaining blocks so deterministic cursors never strand a waiter.
      for (;;) {
        i64 b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= num_blocks) return;
        try {
          fn(b, worker_id);
        } catch (...) {
        }
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(pool));
  for (int w = 0; w < pool; ++w) threads.emplace_back(worker_loop, w);
  for (auto& t : threads) t.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tq

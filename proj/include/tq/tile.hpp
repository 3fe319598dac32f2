#pragma once

/**
 * Tile model: a thread block processes one tile of block_threads *
 * items_per_thread consecutive elements. On the CPU a single worker executes
 * the whole block, with logical thread t owning the strided items
 * t, t + block_threads, t + 2*block_threads, ...
 */

#include <cstring>
#include <limits>
#include <type_traits>
#include <vector>

#include "tq/common.hpp"

namespace tq {

// Canonical sweep domains used by the benchmarks. TileConfig itself accepts
// any positive shape (the run_kernel contract only needs a positive tile).
inline constexpr int kSweepBlockThreads[] = {32, 64, 128, 256, 512, 1024};
inline constexpr int kSweepItemsPerThread[] = {1, 2, 4, 8};

struct TileConfig {
  int block_threads = 128;
  int items_per_thread = 4;

  constexpr i64 tile_size() const {
    return static_cast<i64>(block_threads) * items_per_thread;
  }

  void validate() const {
    TQ_CONFIG_CHECK(block_threads > 0, "TileConfig: block_threads must be positive");
    TQ_CONFIG_CHECK(items_per_thread > 0, "TileConfig: items_per_thread must be positive");
  }
};

template <typename T>
class Tile {
  static_assert(sizeof(T) == 4 && std::is_trivially_copyable_v<T>,
                "tiles hold 4-byte elements");

 public:
  Tile() = default;
  explicit Tile(const TileConfig& cfg) : elems_(cfg.tile_size()), valid_count_(0) {}

  i64 capacity() const { return static_cast<i64>(elems_.size()); }
  i64 valid_count() const { return valid_count_; }
  void set_valid_count(i64 n) {
    TQ_CHECK(n >= 0 && n <= capacity(), "Tile: valid_count out of range");
    valid_count_ = n;
  }

  T& operator[](i64 i) { return elems_[i]; }
  const T& operator[](i64 i) const { return elems_[i]; }
  T* data() { return elems_.data(); }
  const T* data() const { return elems_.data(); }

  // Partial and selective loads leave unwritten slots undefined; in debug
  // builds they are filled with a poison pattern so stray reads surface in
  // tests instead of silently seeing stale data.
  void poison() {
#ifndef NDEBUG
    std::memset(elems_.data(), 0xCD, elems_.size() * sizeof(T));
#endif
  }

 private:
  std::vector<T> elems_;
  i64 valid_count_ = 0;
};

// One flag per tile slot. Flags at and beyond valid_count are always false.
struct BlockBitmap {
  std::vector<std::uint8_t> flags;

  BlockBitmap() = default;
  explicit BlockBitmap(const TileConfig& cfg) : flags(cfg.tile_size(), 0) {}

  i64 size() const { return static_cast<i64>(flags.size()); }
  void clear() { std::fill(flags.begin(), flags.end(), std::uint8_t{0}); }
  bool test(i64 i) const { return flags[i] != 0; }
  void set(i64 i, bool v) { flags[i] = v ? 1 : 0; }

  i64 count() const {
    i64 n = 0;
    for (auto f : flags) n += f;
    return n;
  }
};

enum class PredOp { LT, LE, GT, GE, EQ, BETWEEN };

enum class PredCombine { INIT, AND };

// A comparison against one constant (or an inclusive range for BETWEEN).
// combine selects whether the result seeds a fresh bitmap or narrows an
// existing one.
template <typename T>
struct PredicateSpec {
  PredOp op = PredOp::LT;
  T lo{};
  T hi{};
  PredCombine combine = PredCombine::INIT;

  static PredicateSpec lt(T v) { return {PredOp::LT, v, v, PredCombine::INIT}; }
  static PredicateSpec le(T v) { return {PredOp::LE, v, v, PredCombine::INIT}; }
  static PredicateSpec gt(T v) { return {PredOp::GT, v, v, PredCombine::INIT}; }
  static PredicateSpec ge(T v) { return {PredOp::GE, v, v, PredCombine::INIT}; }
  static PredicateSpec eq(T v) { return {PredOp::EQ, v, v, PredCombine::INIT}; }
  static PredicateSpec between(T lo, T hi) {
    TQ_CONFIG_CHECK(!(hi < lo), "PredicateSpec: BETWEEN requires lo <= hi");
    return {PredOp::BETWEEN, lo, hi, PredCombine::INIT};
  }

  PredicateSpec then_and() const {
    PredicateSpec p = *this;
    p.combine = PredCombine::AND;
    return p;
  }

  bool eval(T y) const {
    switch (op) {
      case PredOp::LT: return y < lo;
      case PredOp::LE: return y <= lo;
      case PredOp::GT: return y > lo;
      case PredOp::GE: return y >= lo;
      case PredOp::EQ: return y == lo;
      case PredOp::BETWEEN: return y >= lo && y <= hi;
    }
    return false;
  }
};

}  // namespace tq

#pragma once

/**
 * Counter-based pseudo-random generator (SplitMix64 finalizer).
 *
 * Every drawn value is a pure function of (stream seed, index), so columns can
 * be generated independently, in any order, on any platform, and always come
 * out bit-identical. Streams are derived from (seed, scale factor, table id,
 * column id).
 */

#include <cstdint>

namespace tq {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b = 0,
      std::uint64_t stream_c = 0)
      : base_(mix64(mix64(mix64(seed) ^ stream_a) ^ stream_b) ^ mix64(stream_c)) {}

  std::uint64_t at(std::uint64_t index) const { return mix64(base_ + index); }

  // Uniform in [lo, hi], inclusive. Modulo bias is ~range/2^64, irrelevant at
  // the domain sizes used here (<= 1e6).
  std::int32_t uniform_i32(std::uint64_t index, std::int32_t lo, std::int32_t hi) const {
    std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return static_cast<std::int32_t>(lo + static_cast<std::int64_t>(at(index) % range));
  }

  float uniform_float(std::uint64_t index, float lo, float hi) const {
    double u = static_cast<double>(at(index) >> 11) * 0x1.0p-53;  // [0,1)
    return static_cast<float>(lo + u * (static_cast<double>(hi) - lo));
  }

 private:
  std::uint64_t base_;
};

}  // namespace tq

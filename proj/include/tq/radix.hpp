#pragma once

/**
 * Radix partitioning passes and the two sort compositions built from them.
 *
 * A pass splits key/payload pairs by an r-bit digit (r <= 8). The histogram
 * phase counts digits per owner (an owner is one worker's contiguous input
 * chunk); a column-major prefix sum over the owner x digit matrix yields
 * per-owner write offsets; the shuffle phase scatters pairs through small
 * cache-resident staging buffers, one buffer line per partition.
 *
 * Digits are extracted from the key with bit 31 flipped, mapping signed order
 * onto unsigned digit order, so composed passes sort signed keys ascending.
 * Only a pass covering the top bit is affected.
 *
 *   lsb_radix_sort  stable low-to-high passes (default schedule: 4 passes of
 *                   8 bits); each pass must be stable
 *   msb_radix_sort  most-significant-first recursion; stability not required,
 *                   partitions at or below 256 pairs fall back to comparison
 *                   sort
 */

#include <span>
#include <vector>

#include "tq/common.hpp"

namespace tq {

struct RadixPass {
  int start_bit = 0;
  int num_bits = 8;
  bool stable = true;

  void validate() const {
    TQ_CONFIG_CHECK(num_bits >= 1 && num_bits <= 8, "RadixPass: num_bits must be in [1,8]");
    TQ_CONFIG_CHECK(start_bit >= 0 && start_bit + num_bits <= 32,
                    "RadixPass: bit range exceeds 32-bit keys");
  }

  int num_digits() const { return 1 << num_bits; }
};

inline u32 radix_digit(i32 key, const RadixPass& pass) {
  const u32 biased = static_cast<u32>(key) ^ 0x80000000u;
  return (biased >> pass.start_bit) & ((1u << pass.num_bits) - 1);
}

struct RadixHistogram {
  i64 num_owners = 0;
  int num_digits = 0;
  i64 chunk = 0;  // input elements per owner (last owner may have fewer)
  std::vector<i64> counts;  // row-major [owner][digit]

  i64 at(i64 owner, int digit) const {
    return counts[static_cast<size_t>(owner) * num_digits + digit];
  }
};

struct RadixOffsets {
  i64 total = 0;
  i64 num_owners = 0;
  int num_digits = 0;
  i64 chunk = 0;
  std::vector<i64> digit_base;   // first output slot of each digit
  std::vector<i64> owner_start;  // row-major [owner][digit] write cursor starts

  i64 start(i64 owner, int digit) const {
    return owner_start[static_cast<size_t>(owner) * num_digits + digit];
  }
};

RadixHistogram radix_histogram(std::span<const i32> keys, const RadixPass& pass,
                               i64 num_owners, int workers = 1);

// Column-major exclusive prefix sum: digit-major, then owner within digit.
// Writing each owner's run at its start slot, in input order, is a stable
// partition.
RadixOffsets radix_offsets(const RadixHistogram& hist);

// Scatters pairs into out_keys/out_payloads grouped by ascending digit.
// Stable passes use the per-owner offsets exactly; unstable passes share one
// atomic cursor per digit (initialized from digit_base) and place each
// owner's staged runs in arrival order.
void radix_shuffle(std::span<const i32> keys, std::span<const i32> payloads,
                   const RadixPass& pass, const RadixOffsets& offsets,
                   std::span<i32> out_keys, std::span<i32> out_payloads,
                   int workers = 1);

void lsb_radix_sort(std::span<i32> keys, std::span<i32> payloads, int workers = 1,
                    int bits_per_pass = 8);

void msb_radix_sort(std::span<i32> keys, std::span<i32> payloads, int workers = 1);

}  // namespace tq

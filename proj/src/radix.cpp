#include "tq/radix.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <numeric>

#include "tq/kernel.hpp"

namespace tq {

namespace {

// Staged pairs per partition: 8 * (4B key + 4B payload) = one 64B line of
// keys plus one of payloads, kept resident while a chunk streams through.
constexpr i64 kStagePairs = 8;

struct Staging {
  std::vector<i32> keys;
  std::vector<i32> payloads;
  std::vector<i64> fill;
  std::vector<i64> cursor;

  explicit Staging(int num_digits)
      : keys(static_cast<size_t>(num_digits) * kStagePairs),
        payloads(static_cast<size_t>(num_digits) * kStagePairs),
        fill(static_cast<size_t>(num_digits), 0),
        cursor(static_cast<size_t>(num_digits), 0) {}
};

}  // namespace

RadixHistogram radix_histogram(std::span<const i32> keys, const RadixPass& pass,
                               i64 num_owners, int workers) {
  pass.validate();
  TQ_CONFIG_CHECK(num_owners >= 1, "radix_histogram: need at least one owner");

  RadixHistogram hist;
  hist.num_owners = num_owners;
  hist.num_digits = pass.num_digits();
  const i64 n = static_cast<i64>(keys.size());
  hist.chunk = (n + num_owners - 1) / num_owners;
  if (hist.chunk == 0) hist.chunk = 1;
  hist.counts.assign(static_cast<size_t>(num_owners) * hist.num_digits, 0);

  parallel_for_blocks(num_owners, workers, [&](i64 owner, int) {
    const i64 lo = owner * hist.chunk;
    const i64 hi = std::min<i64>(n, lo + hist.chunk);
    i64* row = hist.counts.data() + owner * hist.num_digits;
    for (i64 i = lo; i < hi; ++i) ++row[radix_digit(keys[i], pass)];
  });
  return hist;
}

RadixOffsets radix_offsets(const RadixHistogram& hist) {
  RadixOffsets off;
  off.num_owners = hist.num_owners;
  off.num_digits = hist.num_digits;
  off.chunk = hist.chunk;
  off.digit_base.assign(static_cast<size_t>(hist.num_digits), 0);
  off.owner_start.assign(hist.counts.size(), 0);

  i64 running = 0;
  for (int d = 0; d < hist.num_digits; ++d) {
    off.digit_base[static_cast<size_t>(d)] = running;
    for (i64 o = 0; o < hist.num_owners; ++o) {
      off.owner_start[static_cast<size_t>(o) * hist.num_digits + d] = running;
      running += hist.at(o, d);
    }
  }
  off.total = running;
  return off;
}

void radix_shuffle(std::span<const i32> keys, std::span<const i32> payloads,
                   const RadixPass& pass, const RadixOffsets& offsets,
                   std::span<i32> out_keys, std::span<i32> out_payloads,
                   int workers) {
  pass.validate();
  const i64 n = static_cast<i64>(keys.size());
  TQ_CHECK(keys.size() == payloads.size(), "radix_shuffle: key/payload length mismatch");
  TQ_CHECK(offsets.total == n, "radix_shuffle: offsets built from different input");
  TQ_CHECK(offsets.num_digits == pass.num_digits(), "radix_shuffle: offsets/pass digit mismatch");
  TQ_CHECK(static_cast<i64>(out_keys.size()) == n && static_cast<i64>(out_payloads.size()) == n,
           "radix_shuffle: output size mismatch");
  if (n == 0) return;

  const int digits = pass.num_digits();
  std::vector<std::atomic<i64>> shared_cursor(pass.stable ? 0 : static_cast<size_t>(digits));
  if (!pass.stable) {
    for (int d = 0; d < digits; ++d) {
      shared_cursor[static_cast<size_t>(d)].store(offsets.digit_base[static_cast<size_t>(d)],
                                                  std::memory_order_relaxed);
    }
  }

  parallel_for_blocks(offsets.num_owners, workers, [&](i64 owner, int) {
    const i64 lo = owner * offsets.chunk;
    const i64 hi = std::min<i64>(n, lo + offsets.chunk);
    if (lo >= hi) return;

    Staging st(digits);
    if (pass.stable) {
      for (int d = 0; d < digits; ++d) st.cursor[static_cast<size_t>(d)] = offsets.start(owner, d);
    }

    auto flush = [&](int d, i64 count) {
      i64 dest;
      if (pass.stable) {
        dest = st.cursor[static_cast<size_t>(d)];
        st.cursor[static_cast<size_t>(d)] += count;
      } else {
        dest = shared_cursor[static_cast<size_t>(d)].fetch_add(count, std::memory_order_relaxed);
      }
      std::memcpy(out_keys.data() + dest, st.keys.data() + static_cast<size_t>(d) * kStagePairs,
                  static_cast<size_t>(count) * sizeof(i32));
      std::memcpy(out_payloads.data() + dest,
                  st.payloads.data() + static_cast<size_t>(d) * kStagePairs,
                  static_cast<size_t>(count) * sizeof(i32));
    };

    for (i64 i = lo; i < hi; ++i) {
      const int d = static_cast<int>(radix_digit(keys[i], pass));
      i64& f = st.fill[static_cast<size_t>(d)];
      st.keys[static_cast<size_t>(d) * kStagePairs + f] = keys[i];
      st.payloads[static_cast<size_t>(d) * kStagePairs + f] = payloads[i];
      if (++f == kStagePairs) {
        flush(d, kStagePairs);
        f = 0;
      }
    }
    for (int d = 0; d < digits; ++d) {
      if (st.fill[static_cast<size_t>(d)] > 0) flush(d, st.fill[static_cast<size_t>(d)]);
    }
  });
}

void lsb_radix_sort(std::span<i32> keys, std::span<i32> payloads, int workers,
                    int bits_per_pass) {
  TQ_CONFIG_CHECK(bits_per_pass >= 1 && bits_per_pass <= 8,
                  "lsb_radix_sort: bits_per_pass must be in [1,8]");
  TQ_CHECK(keys.size() == payloads.size(), "lsb_radix_sort: key/payload length mismatch");
  const i64 n = static_cast<i64>(keys.size());
  if (n <= 1) return;

  std::vector<i32> tmp_keys(static_cast<size_t>(n));
  std::vector<i32> tmp_payloads(static_cast<size_t>(n));
  std::span<i32> src_k = keys, src_p = payloads;
  std::span<i32> dst_k = tmp_keys, dst_p = tmp_payloads;

  for (int start = 0; start < 32; start += bits_per_pass) {
    RadixPass pass{start, std::min(bits_per_pass, 32 - start), /*stable=*/true};
    auto hist = radix_histogram(src_k, pass, workers, workers);
    auto offs = radix_offsets(hist);
    radix_shuffle(src_k, src_p, pass, offs, dst_k, dst_p, workers);
    std::swap(src_k, dst_k);
    std::swap(src_p, dst_p);
  }
  if (src_k.data() != keys.data()) {
    std::memcpy(keys.data(), src_k.data(), static_cast<size_t>(n) * sizeof(i32));
    std::memcpy(payloads.data(), src_p.data(), static_cast<size_t>(n) * sizeof(i32));
  }
}

namespace {

constexpr i64 kMsbBaseCase = 256;

void sort_pairs_by_key(std::span<i32> keys, std::span<i32> payloads) {
  const i64 n = static_cast<i64>(keys.size());
  std::vector<std::pair<i32, i32>> rows(static_cast<size_t>(n));
  for (i64 i = 0; i < n; ++i) rows[static_cast<size_t>(i)] = {keys[i], payloads[i]};
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (i64 i = 0; i < n; ++i) {
    keys[i] = rows[static_cast<size_t>(i)].first;
    payloads[i] = rows[static_cast<size_t>(i)].second;
  }
}

void msb_recurse(std::span<i32> keys, std::span<i32> payloads, std::span<i32> scratch_k,
                 std::span<i32> scratch_p, int start_bit, int workers) {
  const i64 n = static_cast<i64>(keys.size());
  if (n <= kMsbBaseCase || start_bit < 0) {
    sort_pairs_by_key(keys, payloads);
    return;
  }

  RadixPass pass{start_bit, 8, /*stable=*/false};
  auto hist = radix_histogram(keys, pass, workers, workers);
  auto offs = radix_offsets(hist);
  radix_shuffle(keys, payloads, pass, offs, scratch_k.subspan(0, keys.size()),
                scratch_p.subspan(0, keys.size()), workers);
  std::memcpy(keys.data(), scratch_k.data(), static_cast<size_t>(n) * sizeof(i32));
  std::memcpy(payloads.data(), scratch_p.data(), static_cast<size_t>(n) * sizeof(i32));

  for (int d = 0; d < pass.num_digits(); ++d) {
    const i64 lo = offs.digit_base[static_cast<size_t>(d)];
    const i64 hi = d + 1 < pass.num_digits() ? offs.digit_base[static_cast<size_t>(d) + 1] : n;
    if (hi - lo > 1) {
      msb_recurse(keys.subspan(lo, hi - lo), payloads.subspan(lo, hi - lo),
                  scratch_k.subspan(lo, hi - lo), scratch_p.subspan(lo, hi - lo),
                  start_bit - 8, 1);
    }
  }
}

}  // namespace

void msb_radix_sort(std::span<i32> keys, std::span<i32> payloads, int workers) {
  TQ_CHECK(keys.size() == payloads.size(), "msb_radix_sort: key/payload length mismatch");
  if (keys.size() <= 1) return;
  std::vector<i32> scratch_k(keys.size());
  std::vector<i32> scratch_p(keys.size());
  msb_recurse(keys, payloads, scratch_k, scratch_p, 24, workers);
}

}  // namespace tq

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tq/rng.hpp"
#include "tq/select.hpp"

using namespace tq;

namespace {

constexpr i32 kDomain = 1 << 16;

std::vector<i32> uniform_input(i64 n, u64 seed) {
  Rng rng(seed, 21);
  std::vector<i32> v(static_cast<size_t>(n));
  for (i64 i = 0; i < n; ++i)
    v[static_cast<size_t>(i)] = rng.uniform_i32(u64(i), 0, kDomain - 1);
  return v;
}

// Scalar filter oracle; preserves input order.
std::vector<i32> oracle(const std::vector<i32>& in, const PredicateSpec<i32>& pred) {
  std::vector<i32> out;
  for (i32 v : in) {
    if (pred.eval(v)) out.push_back(v);
  }
  return out;
}

std::vector<i32> sorted(std::vector<i32> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("all variants match the oracle across the selectivity grid") {
  const i64 n = 1 << 15;
  std::vector<i32> input = uniform_input(n, 5);

  for (int step = 0; step <= 10; ++step) {
    const double sigma = step / 10.0;
    auto pred = PredicateSpec<i32>::lt(i32(std::llround(sigma * kDomain)));
    std::vector<i32> want = oracle(input, pred);
    std::vector<i32> want_sorted = sorted(want);

    // Single-threaded scalar variants preserve input order exactly.
    CHECK(select_branching(std::span<const i32>(input), pred) == want);
    CHECK(select_predicated(std::span<const i32>(input), pred) == want);
    CHECK(select_per_element(std::span<const i32>(input), pred) == want);

    // Multi-threaded runs and tile runs agree as multisets.
    CHECK(sorted(select_branching(std::span<const i32>(input), pred, 4)) == want_sorted);
    CHECK(sorted(select_predicated(std::span<const i32>(input), pred, 4)) == want_sorted);
    CHECK(sorted(select_per_element(std::span<const i32>(input), pred, 4)) == want_sorted);
    CHECK(sorted(select_tile(std::span<const i32>(input), pred, TileConfig{})) ==
          want_sorted);

    // Realized selectivity stays within 5 binomial sigmas of the request.
    const double mean = sigma * double(n);
    const double sd = std::sqrt(double(n) * sigma * (1.0 - sigma));
    CHECK(std::abs(double(want.size()) - mean) <= 5.0 * sd + 1e-9);
  }
}

TEST_CASE("selectivity endpoints") {
  const i64 n = 20000;
  std::vector<i32> input = uniform_input(n, 6);

  auto none = PredicateSpec<i32>::lt(0);
  CHECK(select_branching(std::span<const i32>(input), none).empty());
  CHECK(select_tile(std::span<const i32>(input), none, TileConfig{}).empty());

  auto all = PredicateSpec<i32>::lt(kDomain);
  CHECK(select_branching(std::span<const i32>(input), all) == input);
  CHECK(select_predicated(std::span<const i32>(input), all) == input);

  // The tile variant compacts thread-major inside each block, so full-match
  // output is only block-locally permuted: every tile-sized slice holds
  // exactly the input slice's elements, and a one-thread block is the
  // identity outright.
  std::vector<i32> tiled = select_tile(std::span<const i32>(input), all, TileConfig{});
  REQUIRE(tiled.size() == input.size());
  const i64 tile = TileConfig{}.tile_size();
  for (i64 start = 0; start < n; start += tile) {
    auto end = std::size_t(std::min(n, start + tile));
    std::vector<i32> got(tiled.begin() + start, tiled.begin() + end);
    std::vector<i32> want(input.begin() + start, input.begin() + end);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    REQUIRE(got == want);
  }
  CHECK(select_tile(std::span<const i32>(input), all, TileConfig{1, 4}) == input);
}

TEST_CASE("tile select over the config sweep, including odd shapes") {
  const i64 n = 10000;
  std::vector<i32> input = uniform_input(n, 7);
  auto pred = PredicateSpec<i32>::ge(kDomain / 3);
  std::vector<i32> want_sorted = sorted(oracle(input, pred));

  for (int bt : {32, 128, 1024}) {
    for (int ipt : {1, 4}) {
      TileConfig cfg{bt, ipt};
      CHECK(sorted(select_tile(std::span<const i32>(input), pred, cfg)) == want_sorted);
    }
  }
  CHECK(sorted(select_tile(std::span<const i32>(input), pred, TileConfig{257, 8})) ==
        want_sorted);
  CHECK(sorted(select_tile(std::span<const i32>(input), pred, TileConfig{3, 5})) ==
        want_sorted);
}

TEST_CASE("deterministic mode is byte-identical across runs and worker counts") {
  const i64 n = 1 << 16;
  std::vector<i32> input = uniform_input(n, 8);
  auto pred = PredicateSpec<i32>::between(1000, 50000);
  TileConfig cfg{32, 2};

  std::vector<i32> first =
      select_tile(std::span<const i32>(input), pred, cfg, ScheduleMode::kDeterministic, 3);
  for (int run = 0; run < 3; ++run) {
    for (int workers : {1, 2, 3, 7}) {
      CHECK(select_tile(std::span<const i32>(input), pred, cfg,
                        ScheduleMode::kDeterministic, workers) == first);
    }
  }

  std::vector<i32> arrival =
      select_tile(std::span<const i32>(input), pred, cfg, ScheduleMode::kArrivalOrder, 4);
  CHECK(sorted(arrival) == sorted(first));
}

TEST_CASE("into variants return counts and respect output capacity") {
  std::vector<i32> input = {5, 1, 9, 3, 7};
  auto pred = PredicateSpec<i32>::gt(4);
  std::vector<i32> out(input.size(), -1);

  CHECK(select_branching_into(std::span<const i32>(input), pred, std::span<i32>(out)) == 3);
  CHECK(out[0] == 5);
  CHECK(out[1] == 9);
  CHECK(out[2] == 7);
  CHECK(out[4] == -1);

  std::vector<i32> small(2);
  CHECK_THROWS_AS(
      select_branching_into(std::span<const i32>(input), pred, std::span<i32>(small)),
      ContractError);
  CHECK_THROWS_AS(select_tile_into(std::span<const i32>(input), pred,
                                   std::span<i32>(small), TileConfig{}),
                  ContractError);
  CHECK_THROWS_AS(
      select_branching_into(std::span<const i32>(input), pred, std::span<i32>(out), 0),
      ConfigError);
}

TEST_CASE("empty input produces empty output everywhere") {
  std::vector<i32> empty;
  auto pred = PredicateSpec<i32>::lt(10);
  CHECK(select_branching(std::span<const i32>(empty), pred).empty());
  CHECK(select_predicated(std::span<const i32>(empty), pred).empty());
  CHECK(select_per_element(std::span<const i32>(empty), pred).empty());
  CHECK(select_tile(std::span<const i32>(empty), pred, TileConfig{}).empty());
}

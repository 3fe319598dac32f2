#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "tq/project.hpp"
#include "tq/rng.hpp"

using namespace tq;

namespace {

std::pair<std::vector<float>, std::vector<float>> inputs(i64 n, u64 seed) {
  Rng rng(seed, 31);
  std::vector<float> x1(static_cast<size_t>(n)), x2(static_cast<size_t>(n));
  for (i64 i = 0; i < n; ++i) {
    x1[static_cast<size_t>(i)] = rng.uniform_float(u64(2 * i), -8.0f, 8.0f);
    x2[static_cast<size_t>(i)] = rng.uniform_float(u64(2 * i + 1), -8.0f, 8.0f);
  }
  return {std::move(x1), std::move(x2)};
}

bool bit_equal(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

}  // namespace

TEST_CASE("linear projection is bit-exact against the scalar loop") {
  const i64 n = 40000;
  auto [x1, x2] = inputs(n, 3);
  const float a = 0.75f, b = -1.25f;

  std::vector<float> want(static_cast<size_t>(n));
  for (i64 i = 0; i < n; ++i) {
    want[static_cast<size_t>(i)] =
        a * x1[static_cast<size_t>(i)] + b * x2[static_cast<size_t>(i)];
  }

  for (int workers : {1, 4}) {
    for (TileConfig cfg : {TileConfig{128, 4}, TileConfig{32, 1}, TileConfig{257, 8}}) {
      CHECK(bit_equal(project_linear(std::span<const float>(x1),
                                     std::span<const float>(x2), a, b, cfg, workers),
                      want));
    }
  }
}

TEST_CASE("sigmoid projection matches double-precision reference bit-exactly") {
  const i64 n = 20000;
  auto [x1, x2] = inputs(n, 4);
  const float a = 1.5f, b = 0.5f;

  std::vector<float> want(static_cast<size_t>(n));
  for (i64 i = 0; i < n; ++i) {
    const double z = double(a) * x1[static_cast<size_t>(i)] +
                     double(b) * x2[static_cast<size_t>(i)];
    want[static_cast<size_t>(i)] = float(1.0 / (1.0 + std::exp(-z)));
  }

  std::vector<float> got = project_sigmoid(std::span<const float>(x1),
                                           std::span<const float>(x2), a, b);
  CHECK(bit_equal(got, want));
  for (float v : got) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
}

TEST_CASE("projection is elementwise: worker count and tile shape never matter") {
  const i64 n = 33333;  // not a tile multiple
  auto [x1, x2] = inputs(n, 5);

  std::vector<float> base = project_linear(std::span<const float>(x1),
                                           std::span<const float>(x2), 2.0f, 3.0f);
  for (int workers : {2, 8}) {
    for (TileConfig cfg : {TileConfig{64, 2}, TileConfig{1024, 8}}) {
      CHECK(bit_equal(project_linear(std::span<const float>(x1),
                                     std::span<const float>(x2), 2.0f, 3.0f, cfg,
                                     workers),
                      base));
    }
  }
}

TEST_CASE("projection edge cases and errors") {
  std::vector<float> x1 = {1.0f, 2.0f};
  std::vector<float> x2 = {3.0f};
  CHECK_THROWS_AS(
      project_linear(std::span<const float>(x1), std::span<const float>(x2), 1.0f, 1.0f),
      ConfigError);

  std::vector<float> empty;
  CHECK(project_linear(std::span<const float>(empty), std::span<const float>(empty),
                       1.0f, 1.0f)
            .empty());

  std::vector<float> out(1);
  CHECK_THROWS_AS(project_linear_into(std::span<const float>(x1),
                                      std::span<const float>(x1), 1.0f, 1.0f,
                                      std::span<float>(out)),
                  ContractError);
}

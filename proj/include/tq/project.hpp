#pragma once

/**
 * Projection: out[i] = a*x1[i] + b*x2[i], optionally squashed through a
 * sigmoid. Elementwise, so the tiled run matches sequential evaluation
 * bit-exactly. The linear form stays in single precision; the sigmoid is
 * computed in double and rounded once at the end.
 */

#include <cmath>
#include <span>
#include <vector>

#include "tq/block_ops.hpp"
#include "tq/kernel.hpp"

namespace tq {

namespace detail {

template <typename F>
void project_run(std::span<const float> x1, std::span<const float> x2,
                 std::span<float> out, const TileConfig& config, int workers, F&& fn) {
  TQ_CONFIG_CHECK(x1.size() == x2.size(), "project: input length mismatch");
  TQ_CHECK(out.size() >= x1.size(), "project: output capacity too small");
  struct Scratch {
    Tile<float> a, b, r;
    explicit Scratch(const TileConfig& cfg) : a(cfg), b(cfg), r(cfg) {}
  };
  std::vector<Scratch> scratch;
  scratch.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) scratch.emplace_back(config);

  run_kernel(static_cast<i64>(x1.size()), config, ScheduleMode::kDeterministic, workers,
             [&](const BlockContext& ctx) {
               Scratch& s = scratch[static_cast<size_t>(ctx.worker_id)];
               block_load(x1, ctx, s.a);
               block_load(x2, ctx, s.b);
               s.r.poison();
               const i64 n = s.a.valid_count();
               for (i64 i = 0; i < n; ++i) s.r[i] = fn(s.a[i], s.b[i]);
               s.r.set_valid_count(n);
               block_store(s.r, out, ctx.tile_offset());
             });
}

}  // namespace detail

inline void project_linear_into(std::span<const float> x1, std::span<const float> x2,
                                float a, float b, std::span<float> out,
                                const TileConfig& config = {}, int workers = 1) {
  detail::project_run(x1, x2, out, config, workers,
                      [a, b](float u, float v) { return a * u + b * v; });
}

inline void project_sigmoid_into(std::span<const float> x1, std::span<const float> x2,
                                 float a, float b, std::span<float> out,
                                 const TileConfig& config = {}, int workers = 1) {
  const double ad = a, bd = b;
  detail::project_run(x1, x2, out, config, workers, [ad, bd](float u, float v) {
    const double z = ad * u + bd * v;
    return static_cast<float>(1.0 / (1.0 + std::exp(-z)));
  });
}

inline std::vector<float> project_linear(std::span<const float> x1,
                                         std::span<const float> x2, float a, float b,
                                         const TileConfig& config = {}, int workers = 1) {
  std::vector<float> out(x1.size());
  project_linear_into(x1, x2, a, b, std::span<float>(out), config, workers);
  return out;
}

inline std::vector<float> project_sigmoid(std::span<const float> x1,
                                          std::span<const float> x2, float a, float b,
                                          const TileConfig& config = {}, int workers = 1) {
  std::vector<float> out(x1.size());
  project_sigmoid_into(x1, x2, a, b, std::span<float>(out), config, workers);
  return out;
}

}  // namespace tq

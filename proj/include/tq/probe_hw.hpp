#pragma once

#include "tq/cost_models.hpp"

namespace tq {

struct ProbeOptions {
  i64 buffer_bytes = i64(256) << 20;  // well past any last-level cache
  int reps = 3;
};

struct ProbeOutcome {
  HardwareProfile profile;
  bool cache_sizes_known = false;  // false leaves profile.cache_levels empty
};

// Measures sequential read and write bandwidth with streaming passes over a
// large buffer (best of reps) and fills in cache sizes from sysfs when the
// kernel exposes them. Cache bandwidths are never probed; levels carry sizes
// only, which is all the models consume.
ProbeOutcome probe_hardware(const ProbeOptions& options = {});

}  // namespace tq

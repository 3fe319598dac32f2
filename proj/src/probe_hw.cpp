#include "tq/probe_hw.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <vector>

namespace tq {
namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double read_pass_bps(const std::vector<u64>& buf) {
  auto start = std::chrono::steady_clock::now();
  u64 acc = 0;
  for (u64 v : buf) acc += v;
  double elapsed = seconds_since(start);
  // Keep the sum observable so the pass cannot be elided.
  volatile u64 sink = acc;
  (void)sink;
  return double(buf.size() * sizeof(u64)) / elapsed;
}

double write_pass_bps(std::vector<u64>& buf, int rep) {
  auto start = std::chrono::steady_clock::now();
  std::memset(buf.data(), rep + 1, buf.size() * sizeof(u64));
  double elapsed = seconds_since(start);
  return double(buf.size() * sizeof(u64)) / elapsed;
}

// Parses "32K" / "1024K" / "8M" style sysfs cache sizes.
i64 parse_size(std::string text) {
  if (text.empty()) return 0;
  i64 mult = 1;
  char suffix = text.back();
  if (suffix == 'K' || suffix == 'k') mult = 1024;
  if (suffix == 'M' || suffix == 'm') mult = 1024 * 1024;
  if (mult != 1) text.pop_back();
  try {
    return i64(std::stoll(text)) * mult;
  } catch (...) {
    return 0;
  }
}

std::string read_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

// Data/unified cache sizes for cpu0, ascending and deduplicated. Empty when
// sysfs does not expose the cache directory.
std::vector<i64> sysfs_cache_sizes(double* line_bytes) {
  std::vector<i64> sizes;
  fs::path base = "/sys/devices/system/cpu/cpu0/cache";
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(base, ec)) {
    if (!entry.is_directory()) continue;
    std::string type = read_line(entry.path() / "type");
    if (type != "Data" && type != "Unified") continue;
    i64 size = parse_size(read_line(entry.path() / "size"));
    if (size > 0) sizes.push_back(size);
    i64 line = parse_size(read_line(entry.path() / "coherency_line_size"));
    if (line > 0 && line_bytes != nullptr) *line_bytes = double(line);
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

}  // namespace

ProbeOutcome probe_hardware(const ProbeOptions& options) {
  TQ_CONFIG_CHECK(options.buffer_bytes >= (i64(1) << 20),
                  "probe buffer must be at least 1 MiB");
  TQ_CONFIG_CHECK(options.reps >= 1, "probe reps must be >= 1");

  std::vector<u64> buf;
  try {
    buf.assign(std::size_t(options.buffer_bytes / sizeof(u64)), 1);
  } catch (const std::bad_alloc&) {
    throw IoError("probe buffer allocation failed");
  }

  double read_bps = 0, write_bps = 0;
  for (int rep = 0; rep < options.reps; ++rep) {
    read_bps = std::max(read_bps, read_pass_bps(buf));
    write_bps = std::max(write_bps, write_pass_bps(buf, rep));
  }

  ProbeOutcome out;
  out.profile.label = "probed";
  out.profile.read_bw = read_bps;
  out.profile.write_bw = write_bps;
  out.profile.cache_line_bytes = 64;

  std::vector<i64> sizes = sysfs_cache_sizes(&out.profile.cache_line_bytes);
  for (i64 s : sizes)
    out.profile.cache_levels.push_back({double(s), std::nullopt});
  out.cache_sizes_known = !sizes.empty();

  out.profile.validate();
  return out;
}

}  // namespace tq

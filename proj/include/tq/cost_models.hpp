#pragma once

/**
 * Bandwidth-roofline cost models. Every model decomposes an operator into raw
 * byte traffic at 4 bytes per element, divides by the profile's read / write
 * bandwidths, and reports the resulting lower bound on runtime. Hash probes
 * additionally charge one cache line per miss of the level the table fits in.
 */

#include <optional>
#include <string>
#include <vector>

#include "tq/common.hpp"

namespace tq {

struct CacheLevel {
  double size_bytes = 0;
  // Unset means "not bandwidth-limiting": probes served by this level are
  // charged nothing (the bundled profiles leave several level bandwidths unset).
  std::optional<double> bandwidth_bytes_per_sec;
};

struct HardwareProfile {
  std::string label;
  double read_bw = 0;   // bytes/sec
  double write_bw = 0;  // bytes/sec
  double cache_line_bytes = 64;
  std::vector<CacheLevel> cache_levels;  // strictly increasing sizes
  std::optional<double> interconnect_bw;

  void validate() const;

  static HardwareProfile table2_cpu();
  static HardwareProfile table2_gpu();

  // Resolves a built-in label ("table2-cpu", "table2-gpu") or loads a JSON
  // profile file.
  static HardwareProfile resolve(const std::string& name_or_path);
  static HardwareProfile from_json_text(const std::string& text);
  std::string to_json_text() const;
};

struct CostTerm {
  std::string label;
  double seconds = 0;
};

struct CostEstimate {
  std::vector<CostTerm> terms;
  double total_seconds = 0;

  double total_ms() const { return total_seconds * 1e3; }
};

// out[i] = a*x1[i] + b*x2[i]: reads 8N bytes, writes 4N.
CostEstimate model_project(i64 n, const HardwareProfile& profile);

// Filter with selectivity sigma: reads 4N, writes 4*sigma*N.
CostEstimate model_select(i64 n, double sigma, const HardwareProfile& profile);

// Probe of an ht_bytes hash table by probe_count keys. If the table fits in a
// cache level, runtime is the larger of the probe-side scan bound and the
// cache-bandwidth bound on misses of the level below; past the last level,
// misses each fetch a line from memory on top of the scan.
CostEstimate model_join_probe(i64 probe_count, double ht_bytes,
                              const HardwareProfile& profile);

// passes radix partitioning passes over n pairs: per pass, the histogram
// reads 4N and the shuffle reads and writes 8N.
CostEstimate model_sort(i64 n, int passes, const HardwareProfile& profile);

struct CoprocessorEstimate {
  double host_seconds = 0;
  double coprocessor_lower_bound_seconds = 0;
  bool host_wins = false;  // host bound strictly below the transfer bound
};

// Scan of bytes_scanned on the host at host_read_bw versus shipping the same
// bytes over an interconnect at interconnect_bw.
CoprocessorEstimate model_coprocessor(double bytes_scanned, double host_read_bw,
                                      double interconnect_bw);

struct Q21Params {
  double l = 0;       // fact rows
  double s = 0;       // supplier rows
  double p = 0;       // part rows
  double d = 0;       // date rows
  double sigma1 = 0;  // supplier join selectivity
  double sigma2 = 0;  // part join selectivity
  double part_ht_bytes = 0;

  static Q21Params ssb_sf20();
};

enum class Q21Target { kCpuLike, kGpuLike };

// Three-phase estimate for the q21 pipeline: r1 fact-column reads (selective
// columns capped at one line per surviving entry), r2 hash-table probes, r3
// result write-out. gpu_like charges part-probe misses against the fraction
// of the table that fits in the last cache level net of the supplier and
// date tables; cpu_like assumes all three tables are cache-resident.
CostEstimate model_q21(const Q21Params& params, const HardwareProfile& profile,
                       Q21Target target);

}  // namespace tq

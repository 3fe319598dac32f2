#include "tq/cost_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tq {
namespace {

using nlohmann::json;

CostEstimate finish(std::vector<CostTerm> terms) {
  CostEstimate est;
  est.terms = std::move(terms);
  for (const auto& t : est.terms) est.total_seconds += t.seconds;
  return est;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

// ------------------------------------------------------------- profiles

void HardwareProfile::validate() const {
  TQ_CONFIG_CHECK(read_bw > 0, "profile read_bw must be > 0");
  TQ_CONFIG_CHECK(write_bw > 0, "profile write_bw must be > 0");
  TQ_CONFIG_CHECK(cache_line_bytes > 0, "profile cache_line_bytes must be > 0");
  double prev = 0;
  for (const auto& level : cache_levels) {
    TQ_CONFIG_CHECK(level.size_bytes > prev,
                    "cache level sizes must be positive and strictly increasing");
    if (level.bandwidth_bytes_per_sec)
      TQ_CONFIG_CHECK(*level.bandwidth_bytes_per_sec > 0,
                      "cache level bandwidth must be > 0 when given");
    prev = level.size_bytes;
  }
  if (interconnect_bw)
    TQ_CONFIG_CHECK(*interconnect_bw > 0, "interconnect_bw must be > 0");
}

HardwareProfile HardwareProfile::table2_cpu() {
  HardwareProfile p;
  p.label = "table2-cpu";
  p.read_bw = 53e9;
  p.write_bw = 55e9;
  p.cache_line_bytes = 64;
  p.cache_levels = {{256e3, std::nullopt}, {20e6, 157e9}};
  p.interconnect_bw = 12.8e9;
  return p;
}

HardwareProfile HardwareProfile::table2_gpu() {
  HardwareProfile p;
  p.label = "table2-gpu";
  p.read_bw = 880e9;
  p.write_bw = 880e9;
  p.cache_line_bytes = 128;
  p.cache_levels = {{6e6, std::nullopt}};
  p.interconnect_bw = 12.8e9;
  return p;
}

HardwareProfile HardwareProfile::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("profile parse error: ") + e.what());
  }
  HardwareProfile p;
  try {
    p.label = j.value("label", std::string("unnamed"));
    p.read_bw = j.at("read_bw_bytes_per_sec").get<double>();
    p.write_bw = j.at("write_bw_bytes_per_sec").get<double>();
    p.cache_line_bytes = j.at("cache_line_bytes").get<double>();
    for (const auto& jl : j.value("cache_levels", json::array())) {
      CacheLevel level;
      level.size_bytes = jl.at("size_bytes").get<double>();
      if (jl.contains("bandwidth_bytes_per_sec") &&
          !jl["bandwidth_bytes_per_sec"].is_null())
        level.bandwidth_bytes_per_sec = jl["bandwidth_bytes_per_sec"].get<double>();
      p.cache_levels.push_back(level);
    }
    if (j.contains("interconnect_bw_bytes_per_sec") &&
        !j["interconnect_bw_bytes_per_sec"].is_null())
      p.interconnect_bw = j["interconnect_bw_bytes_per_sec"].get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("profile field error: ") + e.what());
  }
  p.validate();
  return p;
}

std::string HardwareProfile::to_json_text() const {
  json levels = json::array();
  for (const auto& level : cache_levels) {
    json jl;
    jl["size_bytes"] = level.size_bytes;
    if (level.bandwidth_bytes_per_sec)
      jl["bandwidth_bytes_per_sec"] = *level.bandwidth_bytes_per_sec;
    else
      jl["bandwidth_bytes_per_sec"] = nullptr;
    levels.push_back(jl);
  }
  json j;
  j["label"] = label;
  j["read_bw_bytes_per_sec"] = read_bw;
  j["write_bw_bytes_per_sec"] = write_bw;
  j["cache_line_bytes"] = cache_line_bytes;
  j["cache_levels"] = levels;
  if (interconnect_bw) j["interconnect_bw_bytes_per_sec"] = *interconnect_bw;
  return j.dump(2) + "\n";
}

HardwareProfile HardwareProfile::resolve(const std::string& name_or_path) {
  if (name_or_path == "table2-cpu") return table2_cpu();
  if (name_or_path == "table2-gpu") return table2_gpu();
  std::ifstream in(name_or_path);
  if (!in) throw IoError("cannot open profile file: " + name_or_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

// --------------------------------------------------------------- models

CostEstimate model_project(i64 n, const HardwareProfile& profile) {
  profile.validate();
  TQ_CONFIG_CHECK(n >= 0, "element count must be >= 0");
  double dn = double(n);
  return finish({{"read two columns", 8 * dn / profile.read_bw},
                 {"write result column", 4 * dn / profile.write_bw}});
}

CostEstimate model_select(i64 n, double sigma, const HardwareProfile& profile) {
  profile.validate();
  TQ_CONFIG_CHECK(n >= 0, "element count must be >= 0");
  TQ_CONFIG_CHECK(sigma >= 0 && sigma <= 1, "sigma must lie in [0,1]");
  double dn = double(n);
  return finish({{"read input column", 4 * dn / profile.read_bw},
                 {"write matches", 4 * sigma * dn / profile.write_bw}});
}

CostEstimate model_join_probe(i64 probe_count, double ht_bytes,
                              const HardwareProfile& profile) {
  profile.validate();
  TQ_CONFIG_CHECK(probe_count >= 0, "probe count must be >= 0");
  TQ_CONFIG_CHECK(ht_bytes > 0, "hash table size must be > 0");
  TQ_CONFIG_CHECK(!profile.cache_levels.empty(),
                  "join probe model needs cache levels in the profile");

  double p = double(probe_count);
  double c = profile.cache_line_bytes;
  double scan = 8 * p / profile.read_bw;

  const std::vector<CacheLevel>& levels = profile.cache_levels;
  std::size_t fit = levels.size();
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (ht_bytes <= levels[k].size_bytes) {
      fit = k;
      break;
    }
  }

  if (fit < levels.size()) {
    // Table resident in level `fit`. Misses of the level below each pull one
    // line from it; the runtime is whichever of the streaming scan and that
    // line traffic binds. Levels without a configured bandwidth never bind.
    double hit_below =
        fit == 0 ? 0.0 : clamp01(levels[fit - 1].size_bytes / ht_bytes);
    double probe = 0;
    if (levels[fit].bandwidth_bytes_per_sec)
      probe = (1 - hit_below) * p * c / *levels[fit].bandwidth_bytes_per_sec;
    if (probe > scan) return finish({{"cache line fetches", probe}});
    return finish({{"probe column scan", scan}});
  }

  // Table exceeds the last level: every miss pays a memory line fetch on top
  // of the streaming scan.
  double hit = clamp01(levels.back().size_bytes / ht_bytes);
  return finish({{"probe column scan", scan},
                 {"memory line fetches", (1 - hit) * p * c / profile.read_bw}});
}

CostEstimate model_sort(i64 n, int passes, const HardwareProfile& profile) {
  profile.validate();
  TQ_CONFIG_CHECK(n >= 0, "element count must be >= 0");
  TQ_CONFIG_CHECK(passes >= 1, "pass count must be >= 1");
  double dn = double(n);
  double k = double(passes);
  return finish({{"histogram reads", k * 4 * dn / profile.read_bw},
                 {"shuffle reads", k * 8 * dn / profile.read_bw},
                 {"shuffle writes", k * 8 * dn / profile.write_bw}});
}

CoprocessorEstimate model_coprocessor(double bytes_scanned, double host_read_bw,
                                      double interconnect_bw) {
  TQ_CONFIG_CHECK(bytes_scanned >= 0, "bytes_scanned must be >= 0");
  TQ_CONFIG_CHECK(host_read_bw > 0, "host bandwidth must be > 0");
  TQ_CONFIG_CHECK(interconnect_bw > 0, "interconnect bandwidth must be > 0");
  CoprocessorEstimate est;
  est.host_seconds = bytes_scanned / host_read_bw;
  est.coprocessor_lower_bound_seconds = bytes_scanned / interconnect_bw;
  est.host_wins = est.host_seconds < est.coprocessor_lower_bound_seconds;
  return est;
}

Q21Params Q21Params::ssb_sf20() {
  Q21Params q;
  q.l = 120e6;
  q.s = 40e3;
  q.p = 1e6;
  q.d = 2500;
  q.sigma1 = 1.0 / 5.0;
  q.sigma2 = 1.0 / 25.0;
  q.part_ht_bytes = 8e6;
  return q;
}

CostEstimate model_q21(const Q21Params& params, const HardwareProfile& profile,
                       Q21Target target) {
  profile.validate();
  TQ_CONFIG_CHECK(params.l > 0 && params.s > 0 && params.p > 0 && params.d > 0,
                  "q21 cardinalities must be > 0");
  TQ_CONFIG_CHECK(params.sigma1 >= 0 && params.sigma1 <= 1 &&
                      params.sigma2 >= 0 && params.sigma2 <= 1,
                  "q21 selectivities must lie in [0,1]");
  TQ_CONFIG_CHECK(params.part_ht_bytes > 0, "part hash table size must be > 0");

  double c = profile.cache_line_bytes;
  double br = profile.read_bw;
  double bw = profile.write_bw;
  double l = params.l;
  double survivors1 = l * params.sigma1;
  double survivors2 = survivors1 * params.sigma2;
  double full_scan_lines = 4 * l / c;

  // Fact columns: orderdate streams fully; suppkey is read only for rows that
  // survived the supplier probe (at most one line each); partkey and revenue
  // only for rows surviving both probes.
  double r1 = (full_scan_lines + std::min(full_scan_lines, survivors1) +
               2 * std::min(full_scan_lines, survivors2)) *
              c / br;

  // Hash probes: supplier and date tables are built by scanning their keys
  // and payloads; the part table either lives in cache next to them
  // (cpu_like) or spills and pays a line per miss (gpu_like).
  double r2 = 0;
  if (target == Q21Target::kCpuLike) {
    r2 = (2 * params.s + 2 * params.d + 2 * params.p) * c / br;
  } else {
    TQ_CONFIG_CHECK(!profile.cache_levels.empty(),
                    "gpu_like q21 needs cache levels in the profile");
    double resident = 8 * (params.s + params.d);
    double available = profile.cache_levels.back().size_bytes - resident;
    double pi = clamp01(available / params.part_ht_bytes);
    r2 = (2 * params.s + 2 * params.d + (1 - pi) * survivors1) * c / br;
  }

  double r3 = survivors2 * c / br + survivors2 * c / bw;

  return finish({{"fact column reads", r1},
                 {"hash table probes", r2},
                 {"result table traffic", r3}});
}

}  // namespace tq

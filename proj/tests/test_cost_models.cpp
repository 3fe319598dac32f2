#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tq/cost_models.hpp"

using namespace tq;

namespace {

constexpr i64 kN29 = i64(1) << 29;

bool rel_close(double got, double want, double tol) {
  if (want == 0.0) return std::abs(got) <= tol;
  return std::abs(got - want) <= tol * std::abs(want);
}

double term_sum(const CostEstimate& est) {
  double s = 0;
  for (const auto& t : est.terms) s += t.seconds;
  return s;
}

std::string repo_path(const std::string& rel) {
  return std::string(TQ_REPO_DIR) + "/" + rel;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("bundled profile constants") {
  HardwareProfile cpu = HardwareProfile::table2_cpu();
  CHECK(cpu.read_bw == 53e9);
  CHECK(cpu.write_bw == 55e9);
  CHECK(cpu.cache_line_bytes == 64);
  REQUIRE(cpu.cache_levels.size() == 2);
  CHECK(cpu.cache_levels[0].size_bytes == 256e3);
  CHECK_FALSE(cpu.cache_levels[0].bandwidth_bytes_per_sec.has_value());
  CHECK(cpu.cache_levels[1].size_bytes == 20e6);
  CHECK(cpu.cache_levels[1].bandwidth_bytes_per_sec == 157e9);
  CHECK(cpu.interconnect_bw == 12.8e9);

  HardwareProfile gpu = HardwareProfile::table2_gpu();
  CHECK(gpu.read_bw == 880e9);
  CHECK(gpu.write_bw == 880e9);
  CHECK(gpu.cache_line_bytes == 128);
  REQUIRE(gpu.cache_levels.size() == 1);
  CHECK(gpu.cache_levels[0].size_bytes == 6e6);
  CHECK_FALSE(gpu.cache_levels[0].bandwidth_bytes_per_sec.has_value());
}

TEST_CASE("profile validation catches bad inputs") {
  HardwareProfile p = HardwareProfile::table2_cpu();
  CHECK_NOTHROW(p.validate());

  HardwareProfile bad = p;
  bad.read_bw = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = p;
  bad.cache_levels = {{20e6, 157e9}, {256e3, std::nullopt}};  // not increasing
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = p;
  bad.cache_levels[1].bandwidth_bytes_per_sec = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("profile JSON round-trip and bundled config files") {
  for (const char* name : {"table2-cpu", "table2-gpu"}) {
    HardwareProfile built = HardwareProfile::resolve(name);
    HardwareProfile reloaded = HardwareProfile::from_json_text(built.to_json_text());
    CHECK(reloaded.label == built.label);
    CHECK(reloaded.read_bw == built.read_bw);
    CHECK(reloaded.write_bw == built.write_bw);
    CHECK(reloaded.cache_line_bytes == built.cache_line_bytes);
    REQUIRE(reloaded.cache_levels.size() == built.cache_levels.size());
    for (size_t i = 0; i < built.cache_levels.size(); ++i) {
      CHECK(reloaded.cache_levels[i].size_bytes == built.cache_levels[i].size_bytes);
      CHECK(reloaded.cache_levels[i].bandwidth_bytes_per_sec ==
            built.cache_levels[i].bandwidth_bytes_per_sec);
    }
    CHECK(reloaded.interconnect_bw == built.interconnect_bw);

    // The committed config files describe exactly the built-in profiles.
    HardwareProfile from_file = HardwareProfile::from_json_text(
        slurp(repo_path(std::string("configs/") + name + ".json")));
    CHECK(from_file.label == built.label);
    CHECK(from_file.read_bw == built.read_bw);
    CHECK(from_file.write_bw == built.write_bw);
    CHECK(from_file.cache_line_bytes == built.cache_line_bytes);
    REQUIRE(from_file.cache_levels.size() == built.cache_levels.size());
    for (size_t i = 0; i < built.cache_levels.size(); ++i) {
      CHECK(from_file.cache_levels[i].size_bytes == built.cache_levels[i].size_bytes);
      CHECK(from_file.cache_levels[i].bandwidth_bytes_per_sec ==
            built.cache_levels[i].bandwidth_bytes_per_sec);
    }
  }

  CHECK_THROWS_AS(HardwareProfile::resolve("no-such-profile"), IoError);
  CHECK_THROWS_AS(HardwareProfile::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(HardwareProfile::from_json_text("{\"label\":\"x\"}"), ConfigError);
}

TEST_CASE("model_project example values") {
  CHECK(rel_close(model_project(kN29, HardwareProfile::table2_gpu()).total_ms(), 7.32,
                  0.01));
  CHECK(rel_close(model_project(kN29, HardwareProfile::table2_cpu()).total_ms(), 119.6,
                  0.01));
  CHECK(model_project(0, HardwareProfile::table2_cpu()).total_seconds == 0.0);

  // Exact decomposition.
  CostEstimate est = model_project(kN29, HardwareProfile::table2_cpu());
  REQUIRE(est.terms.size() == 2);
  CHECK(est.terms[0].seconds == 8.0 * double(kN29) / 53e9);
  CHECK(est.terms[1].seconds == 4.0 * double(kN29) / 55e9);
  CHECK_THROWS_AS(model_project(-1, HardwareProfile::table2_cpu()), ConfigError);
}

TEST_CASE("model_select examples, sigma wiring, errors") {
  HardwareProfile cpu = HardwareProfile::table2_cpu();

  CostEstimate est = model_select(kN29, 0.5, cpu);
  CHECK(rel_close(est.total_ms(), 60.0, 0.01));
  REQUIRE(est.terms.size() == 2);
  CHECK(rel_close(est.terms[0].seconds * 1e3, 40.5, 0.01));
  CHECK(rel_close(est.terms[1].seconds * 1e3, 19.5, 0.01));

  CHECK(model_select(kN29, 0.0, cpu).terms[1].seconds == 0.0);
  CHECK(model_select(kN29, 1.0, cpu).terms[1].seconds ==
        4.0 * double(kN29) / cpu.write_bw);

  // Write term is linear in sigma; read term is independent of it.
  CostEstimate a = model_select(1 << 20, 0.25, cpu);
  CostEstimate b = model_select(1 << 20, 0.75, cpu);
  CHECK(a.terms[0].seconds == b.terms[0].seconds);
  CHECK(rel_close(b.terms[1].seconds, 3.0 * a.terms[1].seconds, 1e-12));

  CHECK_THROWS_AS(model_select(100, -0.01, cpu), ConfigError);
  CHECK_THROWS_AS(model_select(100, 1.01, cpu), ConfigError);
}

TEST_CASE("model_sort examples") {
  CHECK(rel_close(model_sort(i64(1) << 28, 4, HardwareProfile::table2_gpu()).total_ms(),
                  24.4, 0.01));

  CostEstimate one = model_sort(i64(1) << 28, 1, HardwareProfile::table2_cpu());
  REQUIRE(one.terms.size() == 3);
  CHECK(rel_close(one.terms[0].seconds * 1e3, 20.3, 0.01));
  CHECK(rel_close(one.terms[1].seconds * 1e3, 40.5, 0.01));
  CHECK(rel_close(one.terms[2].seconds * 1e3, 39.0, 0.01));

  // Total scales linearly with the pass count.
  CostEstimate four = model_sort(i64(1) << 28, 4, HardwareProfile::table2_cpu());
  CHECK(rel_close(four.total_seconds, 4.0 * one.total_seconds, 1e-12));

  CHECK(model_sort(0, 4, HardwareProfile::table2_cpu()).total_seconds == 0.0);
  CHECK_THROWS_AS(model_sort(100, 0, HardwareProfile::table2_cpu()), ConfigError);
}

TEST_CASE("model_join_probe case wiring") {
  HardwareProfile cpu = HardwareProfile::table2_cpu();
  HardwareProfile gpu = HardwareProfile::table2_gpu();
  const i64 p = i64(1) << 20;
  const double dp = double(p);
  const double scan = 8.0 * dp / cpu.read_bw;

  // Fits in the bandwidth-free first level: the scan bound is all there is.
  CostEstimate small = model_join_probe(p, 128e3, cpu);
  REQUIRE(small.terms.size() == 1);
  CHECK(small.terms[0].label == "probe column scan");
  CHECK(small.total_seconds == scan);

  // Fits in L3: misses of the level below pay a line from L3 when that binds.
  CostEstimate mid = model_join_probe(p, 512e3, cpu);
  REQUIRE(mid.terms.size() == 1);
  CHECK(mid.terms[0].label == "cache line fetches");
  const double pi = 256e3 / 512e3;
  CHECK(rel_close(mid.total_seconds, (1 - pi) * dp * 64 / 157e9, 1e-12));

  // Past the last level: scan plus memory line fetches, summed.
  CostEstimate big = model_join_probe(p, 40e6, cpu);
  REQUIRE(big.terms.size() == 2);
  CHECK(rel_close(big.terms[0].seconds, scan, 1e-12));
  CHECK(rel_close(big.terms[1].seconds, (1 - 20e6 / 40e6) * dp * 64 / cpu.read_bw,
                  1e-12));

  // H = 2x the last level -> half the probes pay a line fetch.
  CHECK(rel_close(model_join_probe(p, 12e6, gpu).terms[1].seconds,
                  0.5 * dp * 128 / gpu.read_bw, 1e-12));

  CHECK_THROWS_AS(model_join_probe(p, 0.0, cpu), ConfigError);
  CHECK_THROWS_AS(model_join_probe(-1, 1e6, cpu), ConfigError);
  HardwareProfile no_levels = cpu;
  no_levels.cache_levels.clear();
  CHECK_THROWS_AS(model_join_probe(p, 1e6, no_levels), ConfigError);
}

TEST_CASE("join probe estimates are non-decreasing on the benchmark sweep") {
  for (const char* name : {"table2-cpu", "table2-gpu"}) {
    HardwareProfile profile = HardwareProfile::resolve(name);
    double prev = -1;
    for (i64 h = 8 << 10; h <= i64(1) << 30; h *= 2) {
      double total = model_join_probe(1 << 20, double(h), profile).total_seconds;
      CHECK(total >= prev);
      prev = total;
    }
  }
}

TEST_CASE("total_seconds always equals the sum of the terms") {
  HardwareProfile cpu = HardwareProfile::table2_cpu();
  HardwareProfile gpu = HardwareProfile::table2_gpu();
  std::vector<CostEstimate> grid;
  for (i64 n : {i64(0), i64(1), i64(12345), i64(1) << 20, kN29}) {
    for (const HardwareProfile& p : {cpu, gpu}) {
      grid.push_back(model_project(n, p));
      grid.push_back(model_select(n, 0.3, p));
      grid.push_back(model_sort(n, 3, p));
      grid.push_back(model_join_probe(n, 1e6, p));
      grid.push_back(model_join_probe(n, 1e9, p));
    }
  }
  grid.push_back(model_q21(Q21Params::ssb_sf20(), cpu, Q21Target::kCpuLike));
  grid.push_back(model_q21(Q21Params::ssb_sf20(), gpu, Q21Target::kGpuLike));
  for (const CostEstimate& est : grid) {
    CHECK(rel_close(est.total_seconds, term_sum(est), 1e-12));
  }
}

TEST_CASE("coprocessor bounds") {
  CoprocessorEstimate est = model_coprocessor(120e6 * 16.0, 54e9, 12.8e9);
  CHECK(rel_close(est.host_seconds * 1e3, 35.6, 0.01));
  CHECK(rel_close(est.coprocessor_lower_bound_seconds * 1e3, 150.0, 0.01));
  CHECK(est.host_wins);

  CoprocessorEstimate equal = model_coprocessor(1e9, 50e9, 50e9);
  CHECK(equal.host_seconds == equal.coprocessor_lower_bound_seconds);
  CHECK_FALSE(equal.host_wins);

  // host_wins iff the host bandwidth exceeds the interconnect.
  for (double bc : {1e9, 12.8e9, 54e9, 880e9}) {
    for (double bp : {1e9, 12.8e9, 54e9, 880e9}) {
      CHECK(model_coprocessor(1e6, bc, bp).host_wins == (bc > bp));
    }
  }
  CHECK_FALSE(model_coprocessor(0.0, 54e9, 12.8e9).host_wins);
  CHECK_THROWS_AS(model_coprocessor(-1.0, 54e9, 12.8e9), ConfigError);
  CHECK_THROWS_AS(model_coprocessor(1.0, 0.0, 12.8e9), ConfigError);
}

TEST_CASE("q21 model structure and frozen totals") {
  Q21Params params = Q21Params::ssb_sf20();
  CHECK(params.l == 120e6);
  CHECK(params.s == 40e3);
  CHECK(params.p == 1e6);
  CHECK(params.d == 2500);
  CHECK(params.sigma1 == 0.2);
  CHECK(params.sigma2 == 0.04);
  CHECK(params.part_ht_bytes == 8e6);

  HardwareProfile cpu = HardwareProfile::table2_cpu();
  HardwareProfile gpu = HardwareProfile::table2_gpu();

  CostEstimate cpu_est = model_q21(params, cpu, Q21Target::kCpuLike);
  CostEstimate gpu_est = model_q21(params, gpu, Q21Target::kGpuLike);
  REQUIRE(cpu_est.terms.size() == 3);
  REQUIRE(gpu_est.terms.size() == 3);

  // Independent recomputation of each phase.
  {
    const double c = 64, br = 53e9;
    const double lines = 4 * 120e6 / c;
    const double s1 = 120e6 * 0.2, s2 = s1 * 0.04;
    const double r1 =
        (lines + std::min(lines, s1) + 2 * std::min(lines, s2)) * c / br;
    const double r2 = (2 * 40e3 + 2 * 2500 + 2 * 1e6) * c / br;
    const double r3 = s2 * c / br + s2 * c / 55e9;
    CHECK(rel_close(cpu_est.terms[0].seconds, r1, 1e-12));
    CHECK(rel_close(cpu_est.terms[1].seconds, r2, 1e-12));
    CHECK(rel_close(cpu_est.terms[2].seconds, r3, 1e-12));
  }
  {
    const double c = 128, b = 880e9;
    const double lines = 4 * 120e6 / c;
    const double s1 = 120e6 * 0.2, s2 = s1 * 0.04;
    const double r1 = (lines + std::min(lines, s1) + 2 * std::min(lines, s2)) * c / b;
    const double pi = (6e6 - 8 * (40e3 + 2500)) / 8e6;
    const double r2 = (2 * 40e3 + 2 * 2500 + (1 - pi) * s1) * c / b;
    const double r3 = s2 * c / b + s2 * c / b;
    CHECK(rel_close(gpu_est.terms[0].seconds, r1, 1e-12));
    CHECK(rel_close(gpu_est.terms[1].seconds, r2, 1e-12));
    CHECK(rel_close(gpu_est.terms[2].seconds, r3, 1e-12));
    CHECK(rel_close(pi, 0.7075, 1e-4));
  }

  // Frozen totals for the bundled constants.
  CHECK(rel_close(cpu_est.total_ms(), 25.2258, 1e-3));
  CHECK(rel_close(gpu_est.total_ms(), 2.68291, 1e-3));
  CHECK(gpu_est.total_seconds < cpu_est.total_seconds);

  // Target changes only the probe phase.
  CostEstimate cpu_on_gpu = model_q21(params, gpu, Q21Target::kCpuLike);
  CHECK(cpu_on_gpu.terms[0].seconds == gpu_est.terms[0].seconds);
  CHECK(cpu_on_gpu.terms[2].seconds == gpu_est.terms[2].seconds);
  CHECK(cpu_on_gpu.terms[1].seconds != gpu_est.terms[1].seconds);

  Q21Params bad = params;
  bad.l = 0;
  CHECK_THROWS_AS(model_q21(bad, cpu, Q21Target::kCpuLike), ConfigError);
  bad = params;
  bad.sigma1 = 1.5;
  CHECK_THROWS_AS(model_q21(bad, cpu, Q21Target::kCpuLike), ConfigError);
}

TEST_CASE("models match the committed golden file to 1e-9") {
  nlohmann::json golden =
      nlohmann::json::parse(slurp(repo_path("tests/golden/model_golden.json")));
  int checked = 0;
  for (const auto& e : golden["entries"]) {
    HardwareProfile profile = HardwareProfile::resolve(e["profile"].get<std::string>());
    const i64 n = e["n"].get<i64>();
    const std::string model = e["model"].get<std::string>();
    double got = 0;
    if (model == "project") {
      got = model_project(n, profile).total_ms();
    } else if (model == "select") {
      got = model_select(n, e["sigma"].get<double>(), profile).total_ms();
    } else if (model == "sort") {
      got = model_sort(n, e["passes"].get<int>(), profile).total_ms();
    } else {
      FAIL("unknown golden model");
    }
    CHECK(rel_close(got, e["total_ms"].get<double>(), 1e-9));
    ++checked;
  }
  CHECK(checked == 36);
}

/**
 * tq: command-line surface for the engine. Subcommands:
 *   gen     generate a star-schema database directory
 *   ssb     run the 13-query suite (optionally validated / model-compared)
 *   bench   microbenchmarks: select, project, join, sort
 *   probe   measure this machine's bandwidth profile
 *   model   evaluate a cost model and print its term breakdown
 * Reports are line-delimited JSON records (one object per line) or CSV rows
 * with --csv. Exit codes: 0 ok, 1 usage, 2 validation failure, 3 I/O.
 */

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tq/column_io.hpp"
#include "tq/cost_models.hpp"
#include "tq/join.hpp"
#include "tq/probe_hw.hpp"
#include "tq/project.hpp"
#include "tq/radix.hpp"
#include "tq/rng.hpp"
#include "tq/select.hpp"
#include "tq/ssb_gen.hpp"
#include "tq/ssb_queries.hpp"
#include "tq/ssb_reference.hpp"

namespace {

using nlohmann::json;
using namespace tq;

// ------------------------------------------------------------ utilities

// Accepts "2^29", "1048576", "8KB", "64MB", "1GB" (binary units).
i64 parse_amount(const std::string& text) {
  TQ_CONFIG_CHECK(!text.empty(), "empty numeric argument");
  if (auto caret = text.find('^'); caret != std::string::npos) {
    i64 base = std::stoll(text.substr(0, caret));
    i64 exp = std::stoll(text.substr(caret + 1));
    TQ_CONFIG_CHECK(base == 2 && exp >= 0 && exp <= 62,
                    "only 2^k amounts are supported: " + text);
    return i64(1) << exp;
  }
  std::size_t pos = 0;
  double value = std::stod(text, &pos);
  std::string suffix = text.substr(pos);
  for (char& c : suffix) c = char(std::toupper(c));
  double mult = 1;
  if (suffix == "K" || suffix == "KB") mult = 1024;
  else if (suffix == "M" || suffix == "MB") mult = 1024.0 * 1024;
  else if (suffix == "G" || suffix == "GB") mult = 1024.0 * 1024 * 1024;
  else TQ_CONFIG_CHECK(suffix.empty(), "bad numeric suffix: " + text);
  return i64(value * mult);
}

int env_workers() {
  if (const char* w = std::getenv("TQ_WORKERS")) {
    int v = std::atoi(w);
    if (v >= 1) return v;
  }
  return 1;
}

struct Timing {
  std::vector<double> reps_ms;
  double mean_ms = 0;
  double min_ms = 0;
};

template <typename F>
Timing time_reps(int reps, F&& fn) {
  Timing t;
  for (int r = 0; r < reps; ++r) {
    auto start = std::chrono::steady_clock::now();
    fn();
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    t.reps_ms.push_back(ms);
  }
  t.mean_ms = std::accumulate(t.reps_ms.begin(), t.reps_ms.end(), 0.0) /
              double(t.reps_ms.size());
  t.min_ms = *std::min_element(t.reps_ms.begin(), t.reps_ms.end());
  return t;
}

class Reporter {
 public:
  explicit Reporter(bool csv) : csv_(csv) {}

  void emit(const json& record) {
    if (!csv_) {
      std::cout << record.dump() << "\n";
      return;
    }
    if (!header_written_) {
      std::cout << "bench,params,mean_ms,min_ms,bytes_moved,achieved_gbps,"
                   "model_ms,profile\n";
      header_written_ = true;
    }
    std::string params;
    if (record.contains("params")) {
      for (const auto& [k, v] : record["params"].items()) {
        if (!params.empty()) params += ';';
        params += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
    auto field = [&](const char* name) -> std::string {
      if (!record.contains(name)) return "";
      const json& v = record[name];
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    std::cout << field("bench") << ",\"" << params << "\"," << field("mean_ms")
              << "," << field("min_ms") << "," << field("bytes_moved") << ","
              << field("achieved_gbps") << "," << field("model_ms") << ","
              << field("profile") << "\n";
  }

 private:
  bool csv_;
  bool header_written_ = false;
};

json timing_json(const Timing& t) {
  return {{"rep_times_ms", t.reps_ms}, {"mean_ms", t.mean_ms}, {"min_ms", t.min_ms}};
}

void merge_into(json& record, const json& extra) {
  for (const auto& [k, v] : extra.items()) record[k] = v;
}

double gbps(double bytes, double ms) {
  return ms > 0 ? bytes / (ms * 1e-3) / 1e9 : 0.0;
}

std::vector<i32> random_i32(i64 n, u64 seed, u64 stream, i32 lo, i32 hi) {
  Rng rng(seed, stream);
  std::vector<i32> v(static_cast<std::size_t>(n));
  for (i64 i = 0; i < n; ++i) v[std::size_t(i)] = rng.uniform_i32(u64(i), lo, hi);
  return v;
}

// --------------------------------------------------------------- gen/ssb

int cmd_gen(i64 sf, u64 seed, const std::string& out_dir) {
  SsbDatabase db = generate_ssb(sf, seed);
  save_database(db, out_dir);
  std::cout << json({{"bench", "gen"},
                     {"params", {{"sf", sf}, {"seed", seed}, {"out", out_dir}}},
                     {"lineorder_rows", db.lineorder.rows()}})
                   .dump()
            << "\n";
  return 0;
}

struct SsbArgs {
  i64 sf = 1;
  u64 seed = 42;
  std::string db_dir;
  std::string query = "";
  bool all = false;
  int workers = env_workers();
  int reps = 1;
  int block_threads = 128;
  int items_per_thread = 4;
  bool validate = false;
  bool compare_model = false;
  std::string profile_name = "table2-cpu";
  bool csv = false;
};

int cmd_ssb(const SsbArgs& args) {
  TQ_CONFIG_CHECK(args.all || !args.query.empty(),
                  "pass --query <id> or --all");
  std::vector<QueryId> ids = args.all
                                 ? all_query_ids()
                                 : std::vector<QueryId>{query_id_from_name(args.query)};

  SsbDatabase db = args.db_dir.empty() ? generate_ssb(args.sf, args.seed)
                                       : load_database(args.db_dir);
  TileConfig config{args.block_threads, args.items_per_thread};
  Reporter reporter(args.csv);
  bool mismatch = false;

  for (QueryId id : ids) {
    QueryResult result;
    Timing t = time_reps(args.reps, [&] {
      result = run_query(db, id, config, args.workers);
    });

    i64 checksum = 0;
    for (const ResultRow& row : result.rows) checksum += row.sum;

    json record = {{"bench", "ssb"},
                   {"params",
                    {{"query", query_name(id)},
                     {"sf", db.scale_factor},
                     {"workers", args.workers},
                     {"block_threads", config.block_threads},
                     {"items_per_thread", config.items_per_thread}}},
                   {"rows", result.rows.size()},
                   {"checksum", checksum}};
    merge_into(record, timing_json(t));

    if (args.validate) {
      QueryResult expected = run_reference(db, id);
      std::string diff = diff_results(result, expected);
      record["validate"] = diff.empty() ? "pass" : "fail";
      if (!diff.empty()) {
        mismatch = true;
        std::cerr << query_name(id) << " validation mismatch: " << diff << "\n";
      }
    }

    if (args.compare_model && id == QueryId::kQ21) {
      HardwareProfile profile = HardwareProfile::resolve(args.profile_name);
      Q21Params params;
      params.l = double(db.lineorder.rows());
      params.s = double(db.supplier.rows());
      params.p = double(db.part.rows());
      params.d = double(db.date.rows());
      params.sigma1 = 1.0 / 5.0;
      params.sigma2 = 1.0 / 25.0;
      params.part_ht_bytes = 8.0 * double(db.part.rows());
      CostEstimate est = model_q21(params, profile, Q21Target::kCpuLike);
      record["model_ms"] = est.total_ms();
      json terms = json::array();
      for (const CostTerm& term : est.terms)
        terms.push_back({{"label", term.label}, {"ms", term.seconds * 1e3}});
      record["model_terms"] = terms;
      record["profile"] = profile.label;
    }

    reporter.emit(record);
  }
  return mismatch ? 2 : 0;
}

// ----------------------------------------------------------------- bench

struct BenchCommon {
  int reps = 3;
  int workers = env_workers();
  u64 seed = 42;
  bool csv = false;
  bool model = false;
  std::string profile_name = "table2-cpu";
};

int cmd_bench_select(const BenchCommon& common, const std::string& n_text,
                     double sel, bool sweep, const std::string& variant,
                     int block_threads, int items_per_thread,
                     const std::string& schedule) {
  i64 n = parse_amount(n_text);
  constexpr i32 kDomain = 1 << 20;
  std::vector<i32> input = random_i32(n, common.seed, 1, 0, kDomain - 1);
  std::vector<i32> output(static_cast<std::size_t>(n));
  TileConfig config{block_threads, items_per_thread};
  ScheduleMode mode = schedule == "arrival" ? ScheduleMode::kArrivalOrder
                                            : ScheduleMode::kDeterministic;

  std::vector<double> sigmas;
  if (sweep)
    for (int s = 0; s <= 10; ++s) sigmas.push_back(double(s) / 10.0);
  else
    sigmas.push_back(sel);

  std::vector<std::string> variants =
      variant == "all"
          ? std::vector<std::string>{"branching", "predicated", "per-element", "tile"}
          : std::vector<std::string>{variant};

  HardwareProfile profile;
  if (common.model) profile = HardwareProfile::resolve(common.profile_name);

  Reporter reporter(common.csv);
  for (double sigma : sigmas) {
    TQ_CONFIG_CHECK(sigma >= 0 && sigma <= 1, "selectivity outside [0,1]");
    auto pred = PredicateSpec<i32>::lt(i32(std::llround(sigma * kDomain)));
    for (const std::string& v : variants) {
      i64 matched = 0;
      Timing t = time_reps(common.reps, [&] {
        std::span<const i32> in(input);
        std::span<i32> out(output);
        if (v == "branching")
          matched = select_branching_into(in, pred, out, common.workers);
        else if (v == "predicated")
          matched = select_predicated_into(in, pred, out, common.workers);
        else if (v == "per-element")
          matched = select_per_element_into(in, pred, out, common.workers);
        else if (v == "tile")
          matched = select_tile_into(in, pred, out, config, mode, common.workers);
        else
          throw ConfigError("unknown select variant: " + v);
      });

      double bytes = 4.0 * double(n) + 4.0 * double(matched);
      json record = {{"bench", "select"},
                     {"params",
                      {{"n", n},
                       {"sigma", sigma},
                       {"variant", v},
                       {"workers", common.workers},
                       {"block_threads", config.block_threads},
                       {"items_per_thread", config.items_per_thread},
                       {"schedule", schedule}}},
                     {"matched", matched},
                     {"bytes_moved", bytes},
                     {"achieved_gbps", 0.0}};
      merge_into(record, timing_json(t));
      record["achieved_gbps"] = gbps(bytes, t.min_ms);
      if (common.model) {
        record["model_ms"] = model_select(n, sigma, profile).total_ms();
        record["profile"] = profile.label;
      }
      reporter.emit(record);
    }
  }
  return 0;
}

int cmd_bench_project(const BenchCommon& common, const std::string& n_text,
                      bool sigmoid, int block_threads, int items_per_thread) {
  i64 n = parse_amount(n_text);
  std::vector<float> x1(static_cast<std::size_t>(n)), x2(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  Rng rng(common.seed, 2);
  for (i64 i = 0; i < n; ++i) {
    x1[std::size_t(i)] = rng.uniform_float(u64(2 * i), -4.0f, 4.0f);
    x2[std::size_t(i)] = rng.uniform_float(u64(2 * i + 1), -4.0f, 4.0f);
  }
  TileConfig config{block_threads, items_per_thread};

  Timing t = time_reps(common.reps, [&] {
    if (sigmoid)
      project_sigmoid_into(x1, x2, 0.75f, -1.25f, std::span<float>(out), config,
                           common.workers);
    else
      project_linear_into(x1, x2, 0.75f, -1.25f, std::span<float>(out), config,
                          common.workers);
  });

  double bytes = 12.0 * double(n);
  json record = {{"bench", "project"},
                 {"params",
                  {{"n", n},
                   {"variant", sigmoid ? "sigmoid" : "linear"},
                   {"workers", common.workers},
                   {"block_threads", config.block_threads},
                   {"items_per_thread", config.items_per_thread}}},
                 {"bytes_moved", bytes}};
  merge_into(record, timing_json(t));
  record["achieved_gbps"] = gbps(bytes, t.min_ms);
  if (common.model) {
    HardwareProfile profile = HardwareProfile::resolve(common.profile_name);
    record["model_ms"] = model_project(n, profile).total_ms();
    record["profile"] = profile.label;
  }
  Reporter reporter(common.csv);
  reporter.emit(record);
  return 0;
}

int cmd_bench_join(const BenchCommon& common, const std::string& probe_text,
                   const std::string& ht_min_text, const std::string& ht_max_text,
                   const std::string& variant, int block_threads,
                   int items_per_thread) {
  i64 probe_n = parse_amount(probe_text);
  i64 ht_min = parse_amount(ht_min_text);
  i64 ht_max = parse_amount(ht_max_text);
  TQ_CONFIG_CHECK(ht_min >= 16 && ht_min <= ht_max,
                  "hash table sweep bounds must satisfy 16 <= min <= max");
  TileConfig config{block_threads, items_per_thread};

  std::vector<std::string> variants =
      variant == "all" ? std::vector<std::string>{"scalar", "prefetch", "tile"}
                       : std::vector<std::string>{variant};

  std::vector<i32> probe_payloads =
      random_i32(probe_n, common.seed, 3, 0, 999);

  HardwareProfile profile;
  if (common.model) profile = HardwareProfile::resolve(common.profile_name);

  Reporter reporter(common.csv);
  for (i64 ht_bytes = ht_min; ht_bytes <= ht_max; ht_bytes *= 2) {
    i64 capacity = ht_bytes / 8;
    i64 build_n = capacity / 2;
    TQ_CONFIG_CHECK(build_n >= 1, "hash table too small for one entry");

    std::vector<i32> build_keys(static_cast<std::size_t>(build_n));
    for (i64 i = 0; i < build_n; ++i) build_keys[std::size_t(i)] = i32(i + 1);
    std::vector<i32> build_payloads =
        random_i32(build_n, common.seed, 4, 0, 999);
    HashTable table = HashTable::build(build_keys, build_payloads, capacity);

    std::vector<i32> probe_keys =
        random_i32(probe_n, common.seed, 5, 1, i32(build_n));

    for (const std::string& v : variants) {
      i64 checksum = 0;
      Timing t = time_reps(common.reps, [&] {
        if (v == "scalar")
          checksum = join_probe_scalar(probe_keys, probe_payloads, table,
                                       common.workers);
        else if (v == "prefetch")
          checksum = join_probe_prefetch(probe_keys, probe_payloads, table,
                                         common.workers);
        else if (v == "tile")
          checksum = join_probe_tile(probe_keys, probe_payloads, table, config,
                                     common.workers);
        else
          throw ConfigError("unknown join variant: " + v);
      });

      double bytes = 8.0 * double(probe_n);
      json record = {{"bench", "join"},
                     {"params",
                      {{"probe", probe_n},
                       {"ht_bytes", ht_bytes},
                       {"build", build_n},
                       {"variant", v},
                       {"workers", common.workers}}},
                     {"checksum", checksum},
                     {"bytes_moved", bytes}};
      merge_into(record, timing_json(t));
      record["achieved_gbps"] = gbps(bytes, t.min_ms);
      if (common.model) {
        record["model_ms"] =
            model_join_probe(probe_n, double(ht_bytes), profile).total_ms();
        record["profile"] = profile.label;
      }
      reporter.emit(record);
    }
  }
  return 0;
}

int cmd_bench_sort(const BenchCommon& common, const std::string& n_text,
                   const std::string& algo) {
  i64 n = parse_amount(n_text);
  std::vector<i32> keys0 = random_i32(n, common.seed, 6,
                                      std::numeric_limits<i32>::min() / 2,
                                      std::numeric_limits<i32>::max() / 2);
  std::vector<i32> payloads0(static_cast<std::size_t>(n));
  for (i64 i = 0; i < n; ++i) payloads0[std::size_t(i)] = i32(i);

  std::vector<std::string> algos =
      algo == "both" ? std::vector<std::string>{"lsb", "msb"}
                     : std::vector<std::string>{algo};

  Reporter reporter(common.csv);
  for (const std::string& a : algos) {
    TQ_CONFIG_CHECK(a == "lsb" || a == "msb", "unknown sort algorithm: " + a);
    Timing t;
    for (int r = 0; r < common.reps; ++r) {
      std::vector<i32> keys = keys0;
      std::vector<i32> payloads = payloads0;
      auto start = std::chrono::steady_clock::now();
      if (a == "lsb")
        lsb_radix_sort(keys, payloads, common.workers);
      else
        msb_radix_sort(keys, payloads, common.workers);
      t.reps_ms.push_back(std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count());
    }
    t.mean_ms = std::accumulate(t.reps_ms.begin(), t.reps_ms.end(), 0.0) /
                double(t.reps_ms.size());
    t.min_ms = *std::min_element(t.reps_ms.begin(), t.reps_ms.end());

    constexpr int kPasses = 4;
    double bytes = 20.0 * double(n) * kPasses;
    json record = {{"bench", "sort"},
                   {"params",
                    {{"n", n}, {"algo", a}, {"workers", common.workers}}},
                   {"bytes_moved", bytes}};
    merge_into(record, timing_json(t));
    record["achieved_gbps"] = gbps(bytes, t.min_ms);
    if (common.model) {
      HardwareProfile profile = HardwareProfile::resolve(common.profile_name);
      record["model_ms"] = model_sort(n, kPasses, profile).total_ms();
      record["profile"] = profile.label;
    }
    reporter.emit(record);
  }
  return 0;
}

// ----------------------------------------------------------- probe/model

int cmd_probe(const std::string& bytes_text, int reps, const std::string& out_path,
              bool csv) {
  ProbeOptions options;
  options.buffer_bytes = parse_amount(bytes_text);
  options.reps = reps;
  ProbeOutcome outcome = probe_hardware(options);

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write profile: " + out_path);
    out << outcome.profile.to_json_text();
  }

  json levels = json::array();
  for (const CacheLevel& level : outcome.profile.cache_levels)
    levels.push_back(level.size_bytes);
  json record = {{"bench", "probe"},
                 {"params",
                  {{"buffer_bytes", options.buffer_bytes}, {"reps", reps}}},
                 {"read_bw_bytes_per_sec", outcome.profile.read_bw},
                 {"write_bw_bytes_per_sec", outcome.profile.write_bw},
                 {"cache_sizes", levels},
                 {"cache_sizes_known", outcome.cache_sizes_known},
                 {"profile", outcome.profile.label}};
  Reporter reporter(csv);
  reporter.emit(record);
  return 0;
}

void print_estimate(const std::string& model, const CostEstimate& est,
                    const HardwareProfile& profile, bool as_json) {
  if (as_json) {
    json terms = json::array();
    for (const CostTerm& t : est.terms)
      terms.push_back({{"label", t.label}, {"ms", t.seconds * 1e3}});
    std::cout << json({{"model", model},
                       {"profile", profile.label},
                       {"total_ms", est.total_ms()},
                       {"terms", terms}})
                     .dump()
              << "\n";
    return;
  }
  std::cout << model << " on " << profile.label << "\n";
  for (const CostTerm& t : est.terms)
    std::cout << "  " << t.label << ": " << t.seconds * 1e3 << " ms\n";
  std::cout << "  total: " << est.total_ms() << " ms\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tile-based analytical query engine benchmarks"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a database directory");
  i64 gen_sf = 1;
  u64 gen_seed = 42;
  std::string gen_out;
  gen->add_option("--sf", gen_sf, "scale factor (>= 1)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output directory")->required();

  // ssb
  auto* ssb = app.add_subcommand("ssb", "run star-schema queries");
  SsbArgs ssb_args;
  ssb->add_option("--sf", ssb_args.sf, "scale factor when generating in memory");
  ssb->add_option("--seed", ssb_args.seed, "generator seed");
  ssb->add_option("--db", ssb_args.db_dir, "load a generated database directory");
  ssb->add_option("--query", ssb_args.query, "query id (q11..q43)");
  ssb->add_flag("--all", ssb_args.all, "run all 13 queries");
  ssb->add_option("--workers", ssb_args.workers, "worker threads");
  ssb->add_option("--reps", ssb_args.reps, "repetitions per query");
  ssb->add_option("--block-threads", ssb_args.block_threads, "tile threads");
  ssb->add_option("--items", ssb_args.items_per_thread, "items per thread");
  ssb->add_flag("--validate", ssb_args.validate,
                "check against the reference interpreter");
  ssb->add_flag("--compare-model", ssb_args.compare_model,
                "attach the q21 cost model breakdown");
  ssb->add_option("--profile", ssb_args.profile_name,
                  "profile name or JSON path for --compare-model");
  ssb->add_flag("--csv", ssb_args.csv, "CSV output");

  // bench
  auto* bench = app.add_subcommand("bench", "microbenchmarks");
  bench->require_subcommand(1);
  BenchCommon common;
  std::string sel_n = "2^20", sel_variant = "all", sel_schedule = "det";
  double sel_sigma = -1;
  int sel_bt = 128, sel_ipt = 4;
  auto* bsel = bench->add_subcommand("select", "filter microbenchmark");
  bsel->add_option("--n", sel_n, "input size (2^k, plain, or KB/MB/GB)");
  bsel->add_option("--sel", sel_sigma, "selectivity; omit to sweep 0..1 by 0.1");
  bsel->add_option("--variant", sel_variant,
                   "branching|predicated|per-element|tile|all");
  bsel->add_option("--block-threads", sel_bt, "tile threads");
  bsel->add_option("--items", sel_ipt, "items per thread");
  bsel->add_option("--schedule", sel_schedule, "det|arrival (tile variant)");

  std::string prj_n = "2^20";
  bool prj_sigmoid = false;
  int prj_bt = 128, prj_ipt = 4;
  auto* bprj = bench->add_subcommand("project", "fused map microbenchmark");
  bprj->add_option("--n", prj_n, "input size");
  bprj->add_flag("--sigmoid", prj_sigmoid, "sigmoid epilogue instead of linear");
  bprj->add_option("--block-threads", prj_bt, "tile threads");
  bprj->add_option("--items", prj_ipt, "items per thread");

  std::string join_probe = "2^20", join_min = "8KB", join_max = "1GB",
              join_variant = "all";
  int join_bt = 128, join_ipt = 4;
  auto* bjoin = bench->add_subcommand("join", "hash probe microbenchmark");
  bjoin->add_option("--probe", join_probe, "probe-side cardinality");
  bjoin->add_option("--ht-min", join_min, "smallest hash table, bytes");
  bjoin->add_option("--ht-max", join_max, "largest hash table, bytes");
  bjoin->add_option("--variant", join_variant, "scalar|prefetch|tile|all");
  bjoin->add_option("--block-threads", join_bt, "tile threads");
  bjoin->add_option("--items", join_ipt, "items per thread");

  std::string sort_n = "2^20", sort_algo = "lsb";
  auto* bsort = bench->add_subcommand("sort", "radix sort microbenchmark");
  bsort->add_option("--n", sort_n, "pair count");
  bsort->add_option("--algo", sort_algo, "lsb|msb|both");

  for (CLI::App* sub : {bsel, bprj, bjoin, bsort}) {
    sub->add_option("--reps", common.reps, "repetitions");
    sub->add_option("--workers", common.workers, "worker threads");
    sub->add_option("--seed", common.seed, "input seed");
    sub->add_flag("--csv", common.csv, "CSV output");
    sub->add_flag("--model", common.model, "attach cost model prediction");
    sub->add_option("--profile", common.profile_name, "profile for --model");
  }

  // probe
  auto* probe = app.add_subcommand("probe", "measure bandwidth profile");
  std::string probe_bytes = "256MB", probe_out;
  int probe_reps = 3;
  bool probe_csv = false;
  probe->add_option("--bytes", probe_bytes, "streaming buffer size");
  probe->add_option("--reps", probe_reps, "passes per direction");
  probe->add_option("--out", probe_out, "write the profile JSON here");
  probe->add_flag("--csv", probe_csv, "CSV output");

  // model
  auto* model = app.add_subcommand("model", "evaluate a cost model");
  std::string model_id, model_profile = "table2-cpu", model_n = "2^29";
  double model_sigma = 0.5, model_ht = 8e6, model_rows = 120e6;
  double model_bc = 54e9, model_bp = 12.8e9;
  int model_passes = 4;
  std::string model_target = "cpu";
  bool model_json = false;
  model->add_option("id", model_id, "q21|select|project|sort|join|coproc")
      ->required();
  model->add_option("--profile", model_profile, "profile name or JSON path");
  model->add_option("--n", model_n, "element count");
  model->add_option("--sigma", model_sigma, "select selectivity");
  model->add_option("--ht-bytes", model_ht, "join hash table bytes");
  model->add_option("--passes", model_passes, "sort partition passes");
  model->add_option("--rows", model_rows, "coproc rows (16 bytes each)");
  model->add_option("--bc", model_bc, "coproc host bandwidth");
  model->add_option("--bp", model_bp, "coproc interconnect bandwidth");
  model->add_option("--target", model_target, "q21 target: cpu|gpu");
  model->add_flag("--json", model_json, "machine-readable output");

  try {
    app.parse(argc, argv);

    if (*gen) return cmd_gen(gen_sf, gen_seed, gen_out);
    if (*ssb) return cmd_ssb(ssb_args);
    if (*bsel)
      return cmd_bench_select(common, sel_n, sel_sigma < 0 ? 0.5 : sel_sigma,
                              sel_sigma < 0, sel_variant, sel_bt, sel_ipt,
                              sel_schedule);
    if (*bprj) return cmd_bench_project(common, prj_n, prj_sigmoid, prj_bt, prj_ipt);
    if (*bjoin)
      return cmd_bench_join(common, join_probe, join_min, join_max,
                            join_variant, join_bt, join_ipt);
    if (*bsort) return cmd_bench_sort(common, sort_n, sort_algo);
    if (*probe) return cmd_probe(probe_bytes, probe_reps, probe_out, probe_csv);
    if (*model) {
      if (model_id == "coproc") {
        CoprocessorEstimate est =
            model_coprocessor(model_rows * 16.0, model_bc, model_bp);
        if (model_json) {
          std::cout << json({{"model", "coproc"},
                             {"host_ms", est.host_seconds * 1e3},
                             {"coprocessor_ms",
                              est.coprocessor_lower_bound_seconds * 1e3},
                             {"host_wins", est.host_wins}})
                           .dump()
                    << "\n";
        } else {
          std::cout << "coproc: host " << est.host_seconds * 1e3
                    << " ms vs coprocessor lower bound "
                    << est.coprocessor_lower_bound_seconds * 1e3 << " ms ("
                    << (est.host_wins ? "host wins" : "coprocessor may win")
                    << ")\n";
        }
        return 0;
      }
      HardwareProfile profile = HardwareProfile::resolve(model_profile);
      CostEstimate est;
      if (model_id == "q21") {
        Q21Target target = model_target == "gpu" ? Q21Target::kGpuLike
                                                 : Q21Target::kCpuLike;
        est = model_q21(Q21Params::ssb_sf20(), profile, target);
      } else if (model_id == "select") {
        est = model_select(parse_amount(model_n), model_sigma, profile);
      } else if (model_id == "project") {
        est = model_project(parse_amount(model_n), profile);
      } else if (model_id == "sort") {
        est = model_sort(parse_amount(model_n), model_passes, profile);
      } else if (model_id == "join") {
        est = model_join_probe(parse_amount(model_n), model_ht, profile);
      } else {
        throw ConfigError("unknown model id: " + model_id);
      }
      print_estimate(model_id, est, profile, model_json);
      return 0;
    }
    throw ConfigError("no subcommand selected");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#include "tq/ssb_queries.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <sstream>

#include "tq/block_ops.hpp"
#include "tq/hash_table.hpp"

namespace tq {

// ------------------------------------------------------- aggregate table

AggregateTable::AggregateTable(std::vector<GroupPart> parts)
    : parts_(std::move(parts)) {
  i64 cells = 1;
  strides_.assign(parts_.size(), 1);
  for (std::size_t j = parts_.size(); j-- > 0;) {
    const GroupPart& part = parts_[j];
    TQ_CHECK(part.hi >= part.lo, "group part with empty domain");
    strides_[j] = cells;
    cells *= part.cardinality();
  }
  sums_.assign(std::size_t(cells), 0);
  used_.assign(std::size_t(cells), 0);
}

i64 AggregateTable::index_of(const i32* values) const {
  i64 idx = 0;
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    const GroupPart& part = parts_[j];
    TQ_CHECK(values[j] >= part.lo && values[j] <= part.hi,
             "group value outside its declared domain: " + part.label);
    idx += i64(values[j] - part.lo) * strides_[j];
  }
  return idx;
}

void AggregateTable::merge(const AggregateTable& other) {
  TQ_CHECK(cells() == other.cells(), "merging aggregate tables of different shape");
  for (i64 i = 0; i < cells(); ++i) {
    if (!other.used_[std::size_t(i)]) continue;
    sums_[std::size_t(i)] += other.sums_[std::size_t(i)];
    used_[std::size_t(i)] = 1;
  }
}

std::vector<i32> AggregateTable::key_of(i64 index) const {
  std::vector<i32> values(parts_.size());
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    values[j] = parts_[j].lo + i32(index / strides_[j]);
    index %= strides_[j];
  }
  return values;
}

// --------------------------------------------------------------- results

void sort_result(QueryResult& result) {
  std::sort(result.rows.begin(), result.rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              return a.group < b.group;
            });
}

std::string diff_results(const QueryResult& got, const QueryResult& expected) {
  std::ostringstream out;
  if (got.rows.size() != expected.rows.size())
    out << "row count " << got.rows.size() << " vs " << expected.rows.size()
        << "; ";
  int reported = 0;
  std::size_t n = std::min(got.rows.size(), expected.rows.size());
  for (std::size_t i = 0; i < n && reported < 5; ++i) {
    const ResultRow& g = got.rows[i];
    const ResultRow& e = expected.rows[i];
    if (g.group == e.group && g.sum == e.sum) continue;
    ++reported;
    out << "row " << i << ": (";
    for (std::size_t j = 0; j < g.group.size(); ++j)
      out << (j ? "," : "") << g.group[j];
    out << ")=" << g.sum << " vs (";
    for (std::size_t j = 0; j < e.group.size(); ++j)
      out << (j ? "," : "") << e.group[j];
    out << ")=" << e.sum << "; ";
  }
  return out.str();
}

// -------------------------------------------------------------- executor

namespace {

struct BuiltJoin {
  HashTable table;
  std::span<const i32> fact_keys;
};

HashTable build_dim_table(const SsbDatabase& db, const DimJoin& join) {
  const SsbTable& dim = db.table(join.dim_table);
  std::span<const i32> keys = dim.ints(join.dim_key);
  std::span<const i32> payload =
      join.payload ? dim.ints(*join.payload) : std::span<const i32>{};

  std::vector<std::span<const i32>> filter_columns;
  for (const DimFilter& f : join.filters)
    filter_columns.push_back(dim.ints(f.column));

  std::vector<i32> build_keys, build_payloads;
  for (i64 row = 0; row < dim.rows(); ++row) {
    bool pass = true;
    for (std::size_t f = 0; f < join.filters.size() && pass; ++f)
      pass = join.filters[f].passes(filter_columns[f][std::size_t(row)]);
    if (!pass) continue;
    build_keys.push_back(keys[std::size_t(row)]);
    build_payloads.push_back(join.payload ? payload[std::size_t(row)] : 0);
  }

  i64 capacity = std::max<i64>(2, i64(std::bit_ceil(2 * u64(build_keys.size()))));
  return HashTable::build(build_keys, build_payloads, capacity);
}

// Per-worker scratch for one pipelined pass: key/payload tiles and a
// found-mask per join, ping-ponged so a lookup never reads the mask it is
// writing, plus the aggregate value tile.
struct WorkerState {
  explicit WorkerState(const TileConfig& config, std::size_t joins,
                       std::vector<GroupPart> parts)
      : agg_values(config), agg_second(config), partial(std::move(parts)) {
    for (std::size_t j = 0; j < joins; ++j) {
      keys.emplace_back(config);
      payloads.emplace_back(config);
      found.emplace_back(config);
    }
  }

  std::vector<Tile<i32>> keys;
  std::vector<Tile<i32>> payloads;
  std::vector<BlockBitmap> found;
  Tile<i32> agg_values;
  Tile<i32> agg_second;
  AggregateTable partial;
};

QueryResult grouped_result(const AggregateTable& table,
                           const std::vector<GroupPart>& parts) {
  QueryResult result;
  for (const GroupPart& part : parts) result.group_labels.push_back(part.label);
  for (i64 idx = 0; idx < table.cells(); ++idx) {
    if (!table.occupied(idx)) continue;
    result.rows.push_back({table.key_of(idx), table.sum(idx)});
  }
  // Ascending mixed-radix index is already lexicographic group order.
  return result;
}

QueryResult run_flight1(const SsbDatabase& db, const QueryPlan& plan,
                        const TileConfig& config, int workers,
                        QueryStats* stats) {
  const SsbTable& fact = db.lineorder;
  std::vector<std::span<const i32>> filter_cols;
  for (const FactFilter& f : plan.fact_filters)
    filter_cols.push_back(fact.ints(f.column));
  std::vector<std::string> agg_cols = agg_fact_columns(plan.agg);
  std::span<const i32> agg_a = fact.ints(agg_cols.at(0));
  std::span<const i32> agg_b = agg_cols.size() > 1 ? fact.ints(agg_cols.at(1))
                                                   : std::span<const i32>{};

  std::vector<i64> partial_sums(std::size_t(workers), 0);
  std::atomic<i64> survivors{0};

  struct Scratch {
    explicit Scratch(const TileConfig& c) : col(c), value(c), second(c), flags(c) {}
    Tile<i32> col, value, second;
    BlockBitmap flags;
  };
  std::vector<Scratch> scratch;
  scratch.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) scratch.emplace_back(config);

  run_kernel(fact.rows(), config, ScheduleMode::kArrivalOrder, workers,
             [&](const BlockContext& ctx) {
               Scratch& s = scratch[std::size_t(ctx.worker_id)];
               for (std::size_t f = 0; f < filter_cols.size(); ++f) {
                 block_load(filter_cols[f], ctx, s.col);
                 PredicateSpec<i32> pred = plan.fact_filters[f].pred;
                 if (f > 0) pred = pred.then_and();
                 block_pred(s.col, pred, s.flags);
               }

               block_load(agg_a, ctx, s.value);
               if (!agg_b.empty()) {
                 block_load(agg_b, ctx, s.second);
                 for (i64 i = 0; i < s.value.valid_count(); ++i)
                   s.value[i] =
                       i32(agg_value(plan.agg, s.value[i], s.second[i]));
               }
               partial_sums[std::size_t(ctx.worker_id)] +=
                   block_aggregate(s.value, AggKind::SUM, &s.flags);
               survivors.fetch_add(s.flags.count(), std::memory_order_relaxed);
             });

  i64 total = 0;
  for (i64 sum : partial_sums) total += sum;
  if (stats) stats->survivors = {survivors.load()};

  QueryResult result;
  result.rows.push_back({{}, total});
  return result;
}

QueryResult run_joins(const SsbDatabase& db, const QueryPlan& plan,
                      const TileConfig& config, int workers,
                      QueryStats* stats) {
  const SsbTable& fact = db.lineorder;

  std::vector<BuiltJoin> joins;
  for (const DimJoin& join : plan.joins)
    joins.push_back({build_dim_table(db, join), fact.ints(join.fact_key)});

  std::vector<std::string> agg_cols = agg_fact_columns(plan.agg);
  std::span<const i32> agg_a = fact.ints(agg_cols.at(0));
  std::span<const i32> agg_b = agg_cols.size() > 1 ? fact.ints(agg_cols.at(1))
                                                   : std::span<const i32>{};

  std::vector<WorkerState> state;
  state.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w)
    state.emplace_back(config, plan.joins.size(), plan.group);

  std::vector<std::atomic<i64>> survivors(plan.joins.size());

  run_kernel(
      fact.rows(), config, ScheduleMode::kArrivalOrder, workers,
      [&](const BlockContext& ctx) {
        WorkerState& s = state[std::size_t(ctx.worker_id)];
        for (std::size_t j = 0; j < joins.size(); ++j) {
          const BlockBitmap* mask = j == 0 ? nullptr : &s.found[j - 1];
          if (mask == nullptr)
            block_load(joins[j].fact_keys, ctx, s.keys[j]);
          else
            block_load_sel(joins[j].fact_keys, *mask, ctx, s.keys[j]);
          block_lookup(s.keys[j], joins[j].table, s.payloads[j], s.found[j],
                       mask);
          survivors[j].fetch_add(s.found[j].count(),
                                 std::memory_order_relaxed);
        }

        const BlockBitmap& final_mask = s.found.back();
        block_load_sel(agg_a, final_mask, ctx, s.agg_values);
        if (!agg_b.empty()) block_load_sel(agg_b, final_mask, ctx, s.agg_second);

        i32 key_values[8];
        TQ_CHECK(plan.group.size() <= 8, "group arity above pipeline limit");
        for (i64 i = 0; i < s.agg_values.valid_count(); ++i) {
          if (!final_mask.test(i)) continue;
          for (std::size_t g = 0; g < plan.group.size(); ++g)
            key_values[g] = s.payloads[std::size_t(plan.group[g].join_index)][i];
          i64 value = agg_value(plan.agg, s.agg_values[i],
                                agg_b.empty() ? 0 : s.agg_second[i]);
          s.partial.add(s.partial.index_of(key_values), value);
        }
      });

  AggregateTable merged(plan.group);
  for (const WorkerState& s : state) merged.merge(s.partial);

  if (stats) {
    stats->survivors.clear();
    for (const auto& count : survivors) stats->survivors.push_back(count.load());
  }
  return grouped_result(merged, plan.group);
}

}  // namespace

QueryResult run_query(const SsbDatabase& db, QueryId id,
                      const TileConfig& config, int workers,
                      QueryStats* stats) {
  config.validate();
  TQ_CONFIG_CHECK(workers >= 1, "run_query: workers must be >= 1");
  const QueryPlan& plan = plan_for(id);
  if (plan.joins.empty())
    return run_flight1(db, plan, config, workers, stats);
  return run_joins(db, plan, config, workers, stats);
}

}  // namespace tq

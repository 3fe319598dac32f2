#pragma once

/**
 * Tile-pipeline execution of the 13 star-schema queries: build filtered
 * dimension hash tables, then stream the fact table once per query, probing
 * every join inside the same block pass and folding survivors into dense
 * per-worker aggregate tables that merge at the end.
 */

#include <string>
#include <vector>

#include "tq/kernel.hpp"
#include "tq/ssb_gen.hpp"
#include "tq/ssb_plans.hpp"

namespace tq {

// Dense aggregate storage addressed by the mixed-radix encoding of the group
// key parts (perfect hashing over the generator's closed domains). An empty
// part list is a single global cell.
class AggregateTable {
 public:
  explicit AggregateTable(std::vector<GroupPart> parts);

  i64 cells() const { return i64(sums_.size()); }
  const std::vector<GroupPart>& parts() const { return parts_; }

  // Mixed-radix index of one composite key; values[j] pairs with parts[j].
  i64 index_of(const i32* values) const;

  void add(i64 index, i64 value) {
    sums_[std::size_t(index)] += value;
    used_[std::size_t(index)] = 1;
  }

  void merge(const AggregateTable& other);

  bool occupied(i64 index) const { return used_[std::size_t(index)] != 0; }
  i64 sum(i64 index) const { return sums_[std::size_t(index)]; }

  // Decodes the composite key of an occupied cell back into part values.
  std::vector<i32> key_of(i64 index) const;

 private:
  std::vector<GroupPart> parts_;
  std::vector<i64> strides_;
  std::vector<i64> sums_;
  std::vector<u8> used_;
};

struct ResultRow {
  std::vector<i32> group;
  i64 sum = 0;
};

// Unordered set of (group, sum) rows; rows are kept sorted by group so two
// results compare positionally.
struct QueryResult {
  std::vector<std::string> group_labels;
  std::vector<ResultRow> rows;
};

void sort_result(QueryResult& result);

// Empty string when equal; otherwise a short human-readable diff. Used by
// both the test oracle checks and the CLI --validate path.
std::string diff_results(const QueryResult& got, const QueryResult& expected);

// Rows surviving each probe stage (one entry per join; one entry total for
// the join-free flight).
struct QueryStats {
  std::vector<i64> survivors;
};

QueryResult run_query(const SsbDatabase& db, QueryId id,
                      const TileConfig& config = {}, int workers = 1,
                      QueryStats* stats = nullptr);

}  // namespace tq

#pragma once

/**
 * Fixed, hand-derived plans for the 13 star-schema queries. Flight 1 runs
 * join-free with date predicates rewritten onto lo_orderdate literals; the
 * other flights build filtered dimension hash tables and probe them in one
 * pipelined pass over the fact table. Join order per plan is documented in
 * ssb_plans.cpp.
 */

#include <optional>
#include <string>
#include <vector>

#include "tq/tile.hpp"

namespace tq {

enum class QueryId {
  kQ11, kQ12, kQ13,
  kQ21, kQ22, kQ23,
  kQ31, kQ32, kQ33, kQ34,
  kQ41, kQ42, kQ43,
};

const char* query_name(QueryId id);
QueryId query_id_from_name(const std::string& name);  // ConfigError if unknown
std::vector<QueryId> all_query_ids();

// Filter applied while scanning the fact table (flight 1 only).
struct FactFilter {
  std::string column;
  PredicateSpec<i32> pred;
};

// Union of inclusive code ranges on one dimension column; a row passes when
// any range contains its value. Single values and IN-lists of two cities fit
// this shape.
struct DimFilter {
  std::string column;
  std::vector<std::pair<i32, i32>> ranges;

  bool passes(i32 value) const {
    for (auto [lo, hi] : ranges)
      if (value >= lo && value <= hi) return true;
    return false;
  }
};

struct DimJoin {
  std::string dim_table;
  std::string dim_key;                 // key column in the dimension table
  std::string fact_key;                // foreign key column in lineorder
  std::vector<DimFilter> filters;      // all must pass to enter the table
  std::optional<std::string> payload;  // dimension column carried to group-by
};

// One component of the composite group key: the payload of joins[join_index],
// with its closed domain [lo, hi] for dense aggregation.
struct GroupPart {
  int join_index;
  i32 lo;
  i32 hi;
  std::string label;

  i32 cardinality() const { return hi - lo + 1; }
};

enum class AggExpr {
  kRevenue,                  // SUM(lo_revenue)
  kExtPriceTimesDiscount,    // SUM(lo_extendedprice * lo_discount)
  kRevenueMinusSupplyCost,   // SUM(lo_revenue - lo_supplycost)
};

std::vector<std::string> agg_fact_columns(AggExpr agg);
i64 agg_value(AggExpr agg, i32 a, i32 b);  // b ignored for kRevenue

struct QueryPlan {
  QueryId id = QueryId::kQ11;
  std::string description;
  std::vector<FactFilter> fact_filters;  // flight 1
  std::vector<DimJoin> joins;            // flights 2-4, probe order
  std::vector<GroupPart> group;          // empty for flight 1
  AggExpr agg = AggExpr::kRevenue;
};

const QueryPlan& plan_for(QueryId id);

}  // namespace tq

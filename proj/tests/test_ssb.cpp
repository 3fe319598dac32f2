#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tq/ssb_gen.hpp"
#include "tq/ssb_plans.hpp"
#include "tq/ssb_queries.hpp"
#include "tq/ssb_reference.hpp"

using namespace tq;

namespace {

// Ten fact rows against four-row dimensions, small enough that every query
// below is checked by hand.
SsbDatabase fixture() {
  SsbDatabase db;
  db.scale_factor = 1;
  db.seed = 0;

  db.date.name = "date";
  db.date.columns = {
      Column::int32("d_datekey", {19930105, 19940101, 19940215, 19970710}),
      Column::int32("d_year", {1993, 1994, 1994, 1997}),
      Column::int32("d_yearmonthnum", {199301, 199401, 199402, 199707}),
      Column::int32("d_yearmonth", {12, 24, 25, 66}),
      Column::int32("d_weeknuminyear", {1, 1, 7, 28}),
  };

  db.supplier.name = "supplier";
  db.supplier.columns = {
      Column::int32("s_suppkey", {1, 2, 3, 4}),
      Column::int32("s_city", {90, 60, 100, 150}),
      Column::int32("s_nation", {9, 6, 10, 15}),
      Column::int32("s_region", {1, 1, 2, 3}),
  };

  db.customer.name = "customer";
  db.customer.columns = {
      Column::int32("c_custkey", {1, 2, 3, 4}),
      Column::int32("c_city", {95, 75, 110, 190}),
      Column::int32("c_nation", {9, 7, 11, 19}),
      Column::int32("c_region", {1, 1, 2, 3}),
  };

  db.part.name = "part";
  db.part.columns = {
      Column::int32("p_partkey", {1, 2, 3, 4}),
      Column::int32("p_brand1", {30, 70, 260, 900}),
      Column::int32("p_category", {0, 1, 6, 22}),
      Column::int32("p_mfgr", {0, 0, 1, 4}),
  };

  db.lineorder.name = "lineorder";
  db.lineorder.columns = {
      Column::int32("lo_orderdate",
                    {19930105, 19930105, 19940215, 19930105, 19930105,
                     19970710, 19940101, 19930105, 19930105, 19970710}),
      Column::int32("lo_custkey", {1, 2, 1, 3, 1, 2, 1, 4, 1, 1}),
      Column::int32("lo_suppkey", {1, 2, 3, 1, 2, 1, 1, 4, 1, 2}),
      Column::int32("lo_partkey", {1, 3, 2, 1, 4, 3, 1, 2, 3, 1}),
      Column::int32("lo_quantity", {10, 30, 20, 5, 24, 40, 1, 10, 24, 50}),
      Column::int32("lo_discount", {2, 3, 1, 0, 3, 5, 1, 10, 1, 0}),
      Column::int32("lo_extendedprice",
                    {1000, 2000, 3000, 4000, 1500, 2500, 7777, 100, 999, 123}),
      Column::int32("lo_revenue",
                    {5000, 7000, 9000, 1200, 800, 10000, 50, 60, 2000, 400}),
      Column::int32("lo_supplycost",
                    {1000, 2500, 100, 200, 800, 3000, 20, 10, 500, 600}),
  };

  // The reference interpreter resolves filter literals through the database's
  // dictionaries, so the fixture carries the canonical set.
  db.dictionaries = {ssb_region_dict("s_region"), ssb_nation_dict("s_nation"),
                     ssb_city_dict("s_city"),     ssb_region_dict("c_region"),
                     ssb_nation_dict("c_nation"), ssb_city_dict("c_city"),
                     ssb_mfgr_dict(),             ssb_category_dict(),
                     ssb_brand_dict(),            ssb_yearmonth_dict()};
  return db;
}

QueryResult make_expected(std::vector<std::string> labels,
                          std::vector<ResultRow> rows) {
  QueryResult r;
  r.group_labels = std::move(labels);
  r.rows = std::move(rows);
  sort_result(r);
  return r;
}

const SsbDatabase& sf1() {
  static SsbDatabase db = generate_ssb(1, 42);
  return db;
}

}  // namespace

TEST_CASE("query names round-trip") {
  std::vector<QueryId> ids = all_query_ids();
  CHECK(ids.size() == 13);
  for (QueryId id : ids) CHECK(query_id_from_name(query_name(id)) == id);
  CHECK(query_id_from_name("q21") == QueryId::kQ21);
  CHECK_THROWS_AS(query_id_from_name("q99"), ConfigError);
}

TEST_CASE("aggregate expressions") {
  CHECK(agg_fact_columns(AggExpr::kRevenue) ==
        std::vector<std::string>({"lo_revenue"}));
  CHECK(agg_fact_columns(AggExpr::kExtPriceTimesDiscount) ==
        std::vector<std::string>({"lo_extendedprice", "lo_discount"}));
  CHECK(agg_fact_columns(AggExpr::kRevenueMinusSupplyCost) ==
        std::vector<std::string>({"lo_revenue", "lo_supplycost"}));
  CHECK(agg_value(AggExpr::kRevenue, 7, 999) == 7);
  CHECK(agg_value(AggExpr::kExtPriceTimesDiscount, 100000, 10) == 1'000'000);
  CHECK(agg_value(AggExpr::kRevenueMinusSupplyCost, 50, 80) == -30);
}

TEST_CASE("dim filter matches any of its ranges") {
  DimFilter f{"c_city", {{2, 2}, {9, 9}}};
  CHECK(f.passes(2));
  CHECK(f.passes(9));
  CHECK_FALSE(f.passes(5));
  CHECK_FALSE(f.passes(10));
  DimFilter range{"d_year", {{1992, 1997}}};
  CHECK(range.passes(1992));
  CHECK(range.passes(1997));
  CHECK_FALSE(range.passes(1998));
}

TEST_CASE("aggregate table indexing and merge") {
  AggregateTable global({});
  CHECK(global.cells() == 1);
  CHECK(global.index_of(nullptr) == 0);
  CHECK_FALSE(global.occupied(0));
  global.add(0, 5);
  global.add(0, 7);
  CHECK(global.occupied(0));
  CHECK(global.sum(0) == 12);

  std::vector<GroupPart> parts = {{3, 1992, 1998, "d_year"},
                                  {1, 0, 24, "c_nation"}};
  CHECK(parts[0].cardinality() == 7);
  AggregateTable table(parts);
  CHECK(table.cells() == 7 * 25);
  for (i32 year : {1992, 1995, 1998}) {
    for (i32 nation : {0, 9, 24}) {
      i32 key[2] = {year, nation};
      i64 idx = table.index_of(key);
      REQUIRE(idx >= 0);
      REQUIRE(idx < table.cells());
      CHECK(table.key_of(idx) == std::vector<i32>({year, nation}));
    }
  }
  i32 bad[2] = {1991, 0};
  CHECK_THROWS_AS(table.index_of(bad), ContractError);

  AggregateTable other(parts);
  i32 k1[2] = {1993, 9};
  i32 k2[2] = {1997, 7};
  table.add(table.index_of(k1), 100);
  other.add(other.index_of(k1), 11);
  other.add(other.index_of(k2), 22);
  table.merge(other);
  CHECK(table.sum(table.index_of(k1)) == 111);
  CHECK(table.sum(table.index_of(k2)) == 22);
  CHECK(table.occupied(table.index_of(k2)));
  CHECK_THROWS_AS(table.merge(global), ContractError);
}

TEST_CASE("fixture q11: join-free flight, hand-checked") {
  SsbDatabase db = fixture();
  // Survivors are rows 0, 4, 6, 8 (row 6 sits exactly on the upper orderdate
  // bound): 1000*2 + 1500*3 + 7777*1 + 999*1.
  QueryResult expected = make_expected({}, {{{}, 15276}});

  QueryStats stats;
  QueryResult got = run_query(db, QueryId::kQ11, {}, 1, &stats);
  CHECK(diff_results(got, expected) == "");
  CHECK(stats.survivors == std::vector<i64>({4}));
  CHECK(diff_results(run_reference(db, QueryId::kQ11), expected) == "");
}

TEST_CASE("fixture q41: four joins and a two-part group, hand-checked") {
  SsbDatabase db = fixture();
  QueryResult expected = make_expected(
      {"d_year", "c_nation"}, {{{1993, 7}, 4500},
                               {{1993, 9}, 5500},
                               {{1994, 9}, 30},
                               {{1997, 7}, 7000},
                               {{1997, 9}, -200}});

  QueryStats stats;
  QueryResult got = run_query(db, QueryId::kQ41, {}, 1, &stats);
  CHECK(diff_results(got, expected) == "");
  // Probe attrition: supplier drops rows 2 and 7, customer drops row 3, part
  // drops row 4, date keeps the rest.
  CHECK(stats.survivors == std::vector<i64>({8, 7, 6, 6}));
  CHECK(diff_results(run_reference(db, QueryId::kQ41), expected) == "");

  // The same answer under every decomposition and worker count.
  for (TileConfig config : {TileConfig{2, 2}, TileConfig{3, 1}, TileConfig{128, 4}}) {
    for (int workers : {1, 2, 4}) {
      CHECK(diff_results(run_query(db, QueryId::kQ41, config, workers), expected) ==
            "");
    }
  }
}

TEST_CASE("fixture zero-match queries") {
  SsbDatabase db = fixture();

  // q21 wants category MFGR#12 parts from AMERICA suppliers; the only such
  // part is bought from ASIA and EUROPE suppliers here. Grouped queries with
  // no survivors produce no rows.
  QueryResult q21 = run_query(db, QueryId::kQ21);
  CHECK(q21.rows.empty());
  CHECK(diff_results(q21, run_reference(db, QueryId::kQ21)) == "");

  // q12 wants discounts 4-6 in Jan 1994; the sole Jan 1994 row has discount
  // 1. The ungrouped flight still reports its single sum row.
  QueryResult q12 = run_query(db, QueryId::kQ12);
  REQUIRE(q12.rows.size() == 1);
  CHECK(q12.rows[0].sum == 0);
  CHECK(q12.rows[0].group.empty());
  CHECK(diff_results(q12, run_reference(db, QueryId::kQ12)) == "");
}

TEST_CASE("run_query rejects bad execution parameters") {
  SsbDatabase db = fixture();
  CHECK_THROWS_AS(run_query(db, QueryId::kQ11, {}, 0), ConfigError);
  CHECK_THROWS_AS(run_query(db, QueryId::kQ11, TileConfig{0, 4}), ConfigError);
}

TEST_CASE("SF=1: all 13 queries match the reference interpreter") {
  const SsbDatabase& db = sf1();
  std::vector<std::pair<QueryId, std::size_t>> row_counts = {
      {QueryId::kQ11, 1},   {QueryId::kQ12, 1},  {QueryId::kQ13, 1},
      {QueryId::kQ21, 280}, {QueryId::kQ22, 56}, {QueryId::kQ23, 7},
      {QueryId::kQ31, 150}, {QueryId::kQ32, 600}, {QueryId::kQ33, 24},
      {QueryId::kQ34, 2},   {QueryId::kQ41, 35}, {QueryId::kQ42, 100},
      {QueryId::kQ43, 382}};
  REQUIRE(row_counts.size() == 13);
  for (auto [id, rows] : row_counts) {
    QueryResult expected = run_reference(db, id);
    CHECK(expected.rows.size() == rows);
    CHECK(diff_results(run_query(db, id), expected) == "");
  }
}

TEST_CASE("SF=1: results are invariant across workers and tile shapes") {
  const SsbDatabase& db = sf1();
  for (QueryId id : {QueryId::kQ21, QueryId::kQ34, QueryId::kQ43}) {
    QueryResult expected = run_reference(db, id);
    for (int workers : {1, 3}) {
      for (TileConfig config : {TileConfig{128, 4}, TileConfig{32, 1}}) {
        CHECK(diff_results(run_query(db, id, config, workers), expected) == "");
      }
    }
  }
}

TEST_CASE("SF=1: group columns come back sorted lexicographically") {
  QueryResult r = run_query(sf1(), QueryId::kQ43);
  REQUIRE(r.rows.size() > 1);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    REQUIRE(std::lexicographical_compare(r.rows[i - 1].group.begin(),
                                         r.rows[i - 1].group.end(),
                                         r.rows[i].group.begin(),
                                         r.rows[i].group.end()));
  }
}

TEST_CASE("SF=1: probe attrition tracks the generator's selectivities") {
  const SsbDatabase& db = sf1();
  const double l = double(db.lineorder.rows());

  // Dimension slice sizes are binomial in the generator; the fact-side
  // survivor counts are then binomial in the realized slice fractions
  // because foreign keys are uniform and independent.
  i64 america_suppliers = 0;
  for (i32 r : db.supplier.ints("s_region")) america_suppliers += r == 1;
  i64 cat12_parts = 0;
  for (i32 c : db.part.ints("p_category")) cat12_parts += c == 1;

  CHECK(std::abs(double(america_suppliers) - 400.0) <=
        3.0 * std::sqrt(2000 * 0.2 * 0.8));
  CHECK(std::abs(double(cat12_parts) - 8000.0) <=
        3.0 * std::sqrt(200000 * 0.04 * 0.96));

  QueryStats stats;
  run_query(db, QueryId::kQ21, {}, 1, &stats);
  REQUIRE(stats.survivors.size() == 3);
  const double p1 = double(america_suppliers) / 2000.0;
  const double p2 = p1 * double(cat12_parts) / 200000.0;
  CHECK(std::abs(double(stats.survivors[0]) - l * p1) <=
        3.0 * std::sqrt(l * p1 * (1 - p1)));
  CHECK(std::abs(double(stats.survivors[1]) - l * p2) <=
        3.0 * std::sqrt(l * p2 * (1 - p2)));
  // The date join filters nothing.
  CHECK(stats.survivors[2] == stats.survivors[1]);
}

#include "tq/ssb_plans.hpp"

#include <array>
#include <map>

#include "tq/ssb_gen.hpp"

namespace tq {
namespace {

// Join order rule, fixed across the suite: filtered dimensions probe in
// ascending selectivity (most selective first) so the found-mask thins out
// early; supplier precedes customer on ties, and date goes last because its
// payload feeds every group key and it rarely filters. q21's order
// supplier, part, date is the canonical instance of the rule.

i32 code(const Dictionary& d, const std::string& value) {
  return d.code_of(value);
}

QueryPlan q11() {
  QueryPlan p;
  p.id = QueryId::kQ11;
  p.description =
      "sum(extendedprice*discount) where year 1993, discount 1-3, quantity<25";
  p.fact_filters = {
      {"lo_orderdate", PredicateSpec<i32>::between(19930101, 19940101)},
      {"lo_discount", PredicateSpec<i32>::between(1, 3)},
      {"lo_quantity", PredicateSpec<i32>::lt(25)},
  };
  p.agg = AggExpr::kExtPriceTimesDiscount;
  return p;
}

QueryPlan q12() {
  QueryPlan p;
  p.id = QueryId::kQ12;
  p.description =
      "sum(extendedprice*discount) where yearmonth 199401, discount 4-6, "
      "quantity 26-35";
  p.fact_filters = {
      {"lo_orderdate", PredicateSpec<i32>::between(19940101, 19940131)},
      {"lo_discount", PredicateSpec<i32>::between(4, 6)},
      {"lo_quantity", PredicateSpec<i32>::between(26, 35)},
  };
  p.agg = AggExpr::kExtPriceTimesDiscount;
  return p;
}

QueryPlan q13() {
  QueryPlan p;
  p.id = QueryId::kQ13;
  p.description =
      "sum(extendedprice*discount) where week 6 of 1994, discount 5-7, "
      "quantity 26-35";
  // Week 6 of 1994 covers days 36-42 of the year: Feb 5 through Feb 11.
  p.fact_filters = {
      {"lo_orderdate", PredicateSpec<i32>::between(19940205, 19940211)},
      {"lo_discount", PredicateSpec<i32>::between(5, 7)},
      {"lo_quantity", PredicateSpec<i32>::between(26, 35)},
  };
  p.agg = AggExpr::kExtPriceTimesDiscount;
  return p;
}

DimJoin supplier_join(std::vector<DimFilter> filters,
                      std::optional<std::string> payload = std::nullopt) {
  return {"supplier", "s_suppkey", "lo_suppkey", std::move(filters),
          std::move(payload)};
}

DimJoin customer_join(std::vector<DimFilter> filters,
                      std::optional<std::string> payload = std::nullopt) {
  return {"customer", "c_custkey", "lo_custkey", std::move(filters),
          std::move(payload)};
}

DimJoin part_join(std::vector<DimFilter> filters,
                  std::optional<std::string> payload = std::nullopt) {
  return {"part", "p_partkey", "lo_partkey", std::move(filters),
          std::move(payload)};
}

DimJoin date_join(std::vector<DimFilter> filters,
                  std::optional<std::string> payload = std::nullopt) {
  return {"date", "d_datekey", "lo_orderdate", std::move(filters),
          std::move(payload)};
}

GroupPart year_part(int join_index) {
  return {join_index, 1992, 1998, "d_year"};
}

// Flight 2: revenue by year and brand for one part slice and one supplier
// region. Probe order supplier, part, date.
QueryPlan q2x(QueryId id, const char* description, DimFilter part_filter,
              const std::string& region) {
  QueryPlan p;
  p.id = id;
  p.description = description;
  p.joins = {
      supplier_join({{"s_region", {{code(ssb_region_dict("s_region"), region),
                                    code(ssb_region_dict("s_region"), region)}}}}),
      part_join({std::move(part_filter)}, "p_brand1"),
      date_join({}, "d_year"),
  };
  p.group = {year_part(2), {1, 0, 999, "p_brand1"}};
  p.agg = AggExpr::kRevenue;
  return p;
}

QueryPlan q21() {
  i32 cat = code(ssb_category_dict(), "MFGR#12");
  return q2x(QueryId::kQ21, "revenue by year,brand; category MFGR#12, region AMERICA",
             {"p_category", {{cat, cat}}}, "AMERICA");
}

QueryPlan q22() {
  i32 lo = code(ssb_brand_dict(), "MFGR#2221");
  i32 hi = code(ssb_brand_dict(), "MFGR#2228");
  return q2x(QueryId::kQ22, "revenue by year,brand; brands 2221-2228, region ASIA",
             {"p_brand1", {{lo, hi}}}, "ASIA");
}

QueryPlan q23() {
  i32 b = code(ssb_brand_dict(), "MFGR#2239");
  return q2x(QueryId::kQ23, "revenue by year,brand; brand 2239, region EUROPE",
             {"p_brand1", {{b, b}}}, "EUROPE");
}

// Flight 3: revenue by customer/supplier geography and year. Probe order
// supplier, customer, date (equal selectivities; tie rule).
QueryPlan q3x(QueryId id, const char* description, DimFilter c_filter,
              DimFilter s_filter, const char* c_group, const char* s_group,
              i32 geo_lo, i32 geo_hi, DimFilter d_filter) {
  QueryPlan p;
  p.id = id;
  p.description = description;
  p.joins = {
      supplier_join({std::move(s_filter)}, s_group),
      customer_join({std::move(c_filter)}, c_group),
      date_join({std::move(d_filter)}, "d_year"),
  };
  p.group = {{1, geo_lo, geo_hi, c_group},
             {0, geo_lo, geo_hi, s_group},
             year_part(2)};
  p.agg = AggExpr::kRevenue;
  return p;
}

QueryPlan q31() {
  i32 asia = code(ssb_region_dict("c_region"), "ASIA");
  return q3x(QueryId::kQ31,
             "revenue by c_nation,s_nation,year; both regions ASIA, 1992-1997",
             {"c_region", {{asia, asia}}}, {"s_region", {{asia, asia}}},
             "c_nation", "s_nation", 0, 24,
             {"d_year", {{1992, 1997}}});
}

QueryPlan q32() {
  i32 us = code(ssb_nation_dict("c_nation"), "UNITED STATES");
  return q3x(QueryId::kQ32,
             "revenue by c_city,s_city,year; both nations UNITED STATES, 1992-1997",
             {"c_nation", {{us, us}}}, {"s_nation", {{us, us}}},
             "c_city", "s_city", 0, 249,
             {"d_year", {{1992, 1997}}});
}

std::vector<std::pair<i32, i32>> uk_city_pair() {
  const Dictionary cities = ssb_city_dict("c_city");
  i32 a = code(cities, "UNITED KI1");
  i32 b = code(cities, "UNITED KI5");
  return {{a, a}, {b, b}};
}

QueryPlan q33() {
  auto cities = uk_city_pair();
  return q3x(QueryId::kQ33,
             "revenue by c_city,s_city,year; cities UNITED KI1/KI5, 1992-1997",
             {"c_city", cities}, {"s_city", cities}, "c_city", "s_city", 0,
             249, {"d_year", {{1992, 1997}}});
}

QueryPlan q34() {
  auto cities = uk_city_pair();
  i32 dec97 = code(ssb_yearmonth_dict(), "Dec1997");
  return q3x(QueryId::kQ34,
             "revenue by c_city,s_city,year; cities UNITED KI1/KI5, Dec 1997",
             {"c_city", cities}, {"s_city", cities}, "c_city", "s_city", 0,
             249, {"d_yearmonth", {{dec97, dec97}}});
}

// Flight 4: profit = revenue - supplycost. Join orders follow the
// selectivity rule: q41/q42 probe supplier, customer, part, date; q43's
// 1-in-25 supplier and part filters go first.
QueryPlan q41() {
  i32 america = code(ssb_region_dict("s_region"), "AMERICA");
  i32 m1 = code(ssb_mfgr_dict(), "MFGR#1");
  i32 m2 = code(ssb_mfgr_dict(), "MFGR#2");
  QueryPlan p;
  p.id = QueryId::kQ41;
  p.description =
      "profit by year,c_nation; regions AMERICA, mfgr MFGR#1-2";
  p.joins = {
      supplier_join({{"s_region", {{america, america}}}}),
      customer_join({{"c_region", {{america, america}}}}, "c_nation"),
      part_join({{"p_mfgr", {{m1, m2}}}}),
      date_join({}, "d_year"),
  };
  p.group = {year_part(3), {1, 0, 24, "c_nation"}};
  p.agg = AggExpr::kRevenueMinusSupplyCost;
  return p;
}

QueryPlan q42() {
  i32 america = code(ssb_region_dict("s_region"), "AMERICA");
  i32 m1 = code(ssb_mfgr_dict(), "MFGR#1");
  i32 m2 = code(ssb_mfgr_dict(), "MFGR#2");
  QueryPlan p;
  p.id = QueryId::kQ42;
  p.description =
      "profit by year,s_nation,category; regions AMERICA, mfgr MFGR#1-2, "
      "1997-1998";
  p.joins = {
      supplier_join({{"s_region", {{america, america}}}}, "s_nation"),
      customer_join({{"c_region", {{america, america}}}}),
      part_join({{"p_mfgr", {{m1, m2}}}}, "p_category"),
      date_join({{"d_year", {{1997, 1998}}}}, "d_year"),
  };
  p.group = {year_part(3), {0, 0, 24, "s_nation"}, {2, 0, 24, "p_category"}};
  p.agg = AggExpr::kRevenueMinusSupplyCost;
  return p;
}

QueryPlan q43() {
  i32 us = code(ssb_nation_dict("s_nation"), "UNITED STATES");
  i32 america = code(ssb_region_dict("c_region"), "AMERICA");
  i32 cat = code(ssb_category_dict(), "MFGR#14");
  QueryPlan p;
  p.id = QueryId::kQ43;
  p.description =
      "profit by year,s_city,brand; s_nation UNITED STATES, category MFGR#14, "
      "c_region AMERICA, 1997-1998";
  p.joins = {
      supplier_join({{"s_nation", {{us, us}}}}, "s_city"),
      part_join({{"p_category", {{cat, cat}}}}, "p_brand1"),
      customer_join({{"c_region", {{america, america}}}}),
      date_join({{"d_year", {{1997, 1998}}}}, "d_year"),
  };
  p.group = {year_part(3), {0, 0, 249, "s_city"}, {1, 0, 999, "p_brand1"}};
  p.agg = AggExpr::kRevenueMinusSupplyCost;
  return p;
}

}  // namespace

const char* query_name(QueryId id) {
  switch (id) {
    case QueryId::kQ11: return "q11";
    case QueryId::kQ12: return "q12";
    case QueryId::kQ13: return "q13";
    case QueryId::kQ21: return "q21";
    case QueryId::kQ22: return "q22";
    case QueryId::kQ23: return "q23";
    case QueryId::kQ31: return "q31";
    case QueryId::kQ32: return "q32";
    case QueryId::kQ33: return "q33";
    case QueryId::kQ34: return "q34";
    case QueryId::kQ41: return "q41";
    case QueryId::kQ42: return "q42";
    case QueryId::kQ43: return "q43";
  }
  throw ContractError("unknown query id");
}

QueryId query_id_from_name(const std::string& name) {
  for (QueryId id : all_query_ids())
    if (name == query_name(id)) return id;
  throw ConfigError("unknown query id: " + name);
}

std::vector<QueryId> all_query_ids() {
  return {QueryId::kQ11, QueryId::kQ12, QueryId::kQ13, QueryId::kQ21,
          QueryId::kQ22, QueryId::kQ23, QueryId::kQ31, QueryId::kQ32,
          QueryId::kQ33, QueryId::kQ34, QueryId::kQ41, QueryId::kQ42,
          QueryId::kQ43};
}

std::vector<std::string> agg_fact_columns(AggExpr agg) {
  switch (agg) {
    case AggExpr::kRevenue:
      return {"lo_revenue"};
    case AggExpr::kExtPriceTimesDiscount:
      return {"lo_extendedprice", "lo_discount"};
    case AggExpr::kRevenueMinusSupplyCost:
      return {"lo_revenue", "lo_supplycost"};
  }
  throw ContractError("unknown aggregate expression");
}

i64 agg_value(AggExpr agg, i32 a, i32 b) {
  switch (agg) {
    case AggExpr::kRevenue:
      return a;
    case AggExpr::kExtPriceTimesDiscount:
      return i64(a) * i64(b);
    case AggExpr::kRevenueMinusSupplyCost:
      return i64(a) - i64(b);
  }
  throw ContractError("unknown aggregate expression");
}

const QueryPlan& plan_for(QueryId id) {
  static const std::map<QueryId, QueryPlan> plans = [] {
    std::map<QueryId, QueryPlan> m;
    for (QueryPlan p : {q11(), q12(), q13(), q21(), q22(), q23(), q31(), q32(),
                        q33(), q34(), q41(), q42(), q43()})
      m.emplace(p.id, std::move(p));
    return m;
  }();
  return plans.at(id);
}

}  // namespace tq

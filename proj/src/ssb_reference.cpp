#include "tq/ssb_reference.hpp"

#include <map>
#include <unordered_map>

namespace tq {
namespace {

struct Ref {
  const SsbDatabase& db;

  std::span<const i32> lo(const char* c) const { return db.lineorder.ints(c); }

  // Dimension rows addressed by foreign key: supplier/customer/part keys are
  // 1-based row numbers; order dates go through a datekey index.
  std::unordered_map<i32, i64> date_row;

  explicit Ref(const SsbDatabase& database) : db(database) {
    std::span<const i32> keys = db.date.ints("d_datekey");
    for (i64 r = 0; r < i64(keys.size()); ++r) date_row.emplace(keys[std::size_t(r)], r);
  }

  i64 dim_row(std::span<const i32> fact_keys, i64 i) const {
    i32 key = fact_keys[std::size_t(i)];
    TQ_CHECK(key >= 1, "foreign key below 1");
    return key - 1;
  }

  i64 drow(i32 orderdate) const { return date_row.at(orderdate); }

  i32 dict_code(const char* dict_name, const char* value) const {
    return db.dict(dict_name).code_of(value);
  }
};

QueryResult from_map(const std::map<std::vector<i32>, i64>& groups,
                     std::vector<std::string> labels) {
  QueryResult result;
  result.group_labels = std::move(labels);
  for (const auto& [key, sum] : groups) result.rows.push_back({key, sum});
  return result;
}

// Flight 1: scan with the same rewritten date-literal predicates the plans
// use; a single ungrouped sum of extendedprice * discount.
QueryResult flight1(const Ref& ref, i32 date_lo, i32 date_hi, i32 disc_lo,
                    i32 disc_hi, i32 qty_lo, i32 qty_hi) {
  auto od = ref.lo("lo_orderdate");
  auto disc = ref.lo("lo_discount");
  auto qty = ref.lo("lo_quantity");
  auto price = ref.lo("lo_extendedprice");

  i64 sum = 0;
  for (std::size_t i = 0; i < od.size(); ++i) {
    if (od[i] < date_lo || od[i] > date_hi) continue;
    if (disc[i] < disc_lo || disc[i] > disc_hi) continue;
    if (qty[i] < qty_lo || qty[i] > qty_hi) continue;
    sum += i64(price[i]) * i64(disc[i]);
  }
  QueryResult result;
  result.rows.push_back({{}, sum});
  return result;
}

// Flight 2: revenue by (d_year, p_brand1) for one part slice and one
// supplier region.
QueryResult flight2(const Ref& ref, i32 s_region, i32 brand_lo, i32 brand_hi,
                    bool by_category, i32 category) {
  auto suppkey = ref.lo("lo_suppkey");
  auto partkey = ref.lo("lo_partkey");
  auto orderdate = ref.lo("lo_orderdate");
  auto revenue = ref.lo("lo_revenue");
  auto sr = ref.db.supplier.ints("s_region");
  auto pb = ref.db.part.ints("p_brand1");
  auto pc = ref.db.part.ints("p_category");
  auto dy = ref.db.date.ints("d_year");

  std::map<std::vector<i32>, i64> groups;
  for (std::size_t i = 0; i < suppkey.size(); ++i) {
    i64 s = ref.dim_row(suppkey, i64(i));
    if (sr[std::size_t(s)] != s_region) continue;
    i64 p = ref.dim_row(partkey, i64(i));
    if (by_category) {
      if (pc[std::size_t(p)] != category) continue;
    } else {
      i32 b = pb[std::size_t(p)];
      if (b < brand_lo || b > brand_hi) continue;
    }
    i64 d = ref.drow(orderdate[i]);
    groups[{dy[std::size_t(d)], pb[std::size_t(p)]}] += revenue[i];
  }
  return from_map(groups, {"d_year", "p_brand1"});
}

// Flight 3: revenue by (customer geo, supplier geo, d_year) under matching
// geography filters and a date restriction.
struct GeoFilter {
  std::span<const i32> column;
  std::vector<i32> allowed;

  bool passes(i64 row) const {
    for (i32 v : allowed)
      if (column[std::size_t(row)] == v) return true;
    return false;
  }
};

QueryResult flight3(const Ref& ref, GeoFilter c_filter, GeoFilter s_filter,
                    std::span<const i32> c_group, std::span<const i32> s_group,
                    const char* c_label, const char* s_label, bool by_yearmonth,
                    i32 date_lo, i32 date_hi) {
  auto custkey = ref.lo("lo_custkey");
  auto suppkey = ref.lo("lo_suppkey");
  auto orderdate = ref.lo("lo_orderdate");
  auto revenue = ref.lo("lo_revenue");
  auto dy = ref.db.date.ints("d_year");
  auto dym = ref.db.date.ints("d_yearmonth");

  std::map<std::vector<i32>, i64> groups;
  for (std::size_t i = 0; i < custkey.size(); ++i) {
    i64 s = ref.dim_row(suppkey, i64(i));
    if (!s_filter.passes(s)) continue;
    i64 c = ref.dim_row(custkey, i64(i));
    if (!c_filter.passes(c)) continue;
    i64 d = ref.drow(orderdate[i]);
    i32 date_value = by_yearmonth ? dym[std::size_t(d)] : dy[std::size_t(d)];
    if (date_value < date_lo || date_value > date_hi) continue;
    groups[{c_group[std::size_t(c)], s_group[std::size_t(s)],
            dy[std::size_t(d)]}] += revenue[i];
  }
  return from_map(groups, {c_label, s_label, "d_year"});
}

// Flight 4 has per-query shapes; handled in run_reference directly.

}  // namespace

QueryResult run_reference(const SsbDatabase& db, QueryId id) {
  Ref ref(db);

  auto region = [&](const char* dict, const char* name) {
    return ref.dict_code(dict, name);
  };

  switch (id) {
    case QueryId::kQ11:
      return flight1(ref, 19930101, 19940101, 1, 3, 1, 24);
    case QueryId::kQ12:
      return flight1(ref, 19940101, 19940131, 4, 6, 26, 35);
    case QueryId::kQ13:
      return flight1(ref, 19940205, 19940211, 5, 7, 26, 35);

    case QueryId::kQ21:
      return flight2(ref, region("s_region", "AMERICA"), 0, 0, true,
                     ref.dict_code("p_category", "MFGR#12"));
    case QueryId::kQ22:
      return flight2(ref, region("s_region", "ASIA"),
                     ref.dict_code("p_brand1", "MFGR#2221"),
                     ref.dict_code("p_brand1", "MFGR#2228"), false, 0);
    case QueryId::kQ23: {
      i32 b = ref.dict_code("p_brand1", "MFGR#2239");
      return flight2(ref, region("s_region", "EUROPE"), b, b, false, 0);
    }

    case QueryId::kQ31: {
      i32 asia_c = region("c_region", "ASIA");
      i32 asia_s = region("s_region", "ASIA");
      return flight3(ref, {ref.db.customer.ints("c_region"), {asia_c}},
                     {ref.db.supplier.ints("s_region"), {asia_s}},
                     ref.db.customer.ints("c_nation"),
                     ref.db.supplier.ints("s_nation"), "c_nation", "s_nation",
                     false, 1992, 1997);
    }
    case QueryId::kQ32: {
      i32 us_c = ref.dict_code("c_nation", "UNITED STATES");
      i32 us_s = ref.dict_code("s_nation", "UNITED STATES");
      return flight3(ref, {ref.db.customer.ints("c_nation"), {us_c}},
                     {ref.db.supplier.ints("s_nation"), {us_s}},
                     ref.db.customer.ints("c_city"),
                     ref.db.supplier.ints("s_city"), "c_city", "s_city", false,
                     1992, 1997);
    }
    case QueryId::kQ33:
    case QueryId::kQ34: {
      std::vector<i32> cities_c = {ref.dict_code("c_city", "UNITED KI1"),
                                   ref.dict_code("c_city", "UNITED KI5")};
      std::vector<i32> cities_s = {ref.dict_code("s_city", "UNITED KI1"),
                                   ref.dict_code("s_city", "UNITED KI5")};
      bool monthly = id == QueryId::kQ34;
      i32 dec97 = ref.dict_code("d_yearmonth", "Dec1997");
      return flight3(ref, {ref.db.customer.ints("c_city"), cities_c},
                     {ref.db.supplier.ints("s_city"), cities_s},
                     ref.db.customer.ints("c_city"),
                     ref.db.supplier.ints("s_city"), "c_city", "s_city",
                     monthly, monthly ? dec97 : 1992, monthly ? dec97 : 1997);
    }

    case QueryId::kQ41:
    case QueryId::kQ42:
    case QueryId::kQ43: {
      auto custkey = ref.lo("lo_custkey");
      auto suppkey = ref.lo("lo_suppkey");
      auto partkey = ref.lo("lo_partkey");
      auto orderdate = ref.lo("lo_orderdate");
      auto revenue = ref.lo("lo_revenue");
      auto cost = ref.lo("lo_supplycost");
      auto cr = ref.db.customer.ints("c_region");
      auto cn = ref.db.customer.ints("c_nation");
      auto sr = ref.db.supplier.ints("s_region");
      auto sn = ref.db.supplier.ints("s_nation");
      auto sc = ref.db.supplier.ints("s_city");
      auto pm = ref.db.part.ints("p_mfgr");
      auto pc = ref.db.part.ints("p_category");
      auto pb = ref.db.part.ints("p_brand1");
      auto dy = ref.db.date.ints("d_year");

      i32 america_c = region("c_region", "AMERICA");
      i32 america_s = region("s_region", "AMERICA");
      i32 us = ref.dict_code("s_nation", "UNITED STATES");
      i32 m1 = ref.dict_code("p_mfgr", "MFGR#1");
      i32 m2 = ref.dict_code("p_mfgr", "MFGR#2");
      i32 cat14 = ref.dict_code("p_category", "MFGR#14");

      std::map<std::vector<i32>, i64> groups;
      for (std::size_t i = 0; i < custkey.size(); ++i) {
        i64 c = ref.dim_row(custkey, i64(i));
        i64 s = ref.dim_row(suppkey, i64(i));
        i64 p = ref.dim_row(partkey, i64(i));
        i64 d = ref.drow(orderdate[i]);
        i32 year = dy[std::size_t(d)];
        i64 profit = i64(revenue[i]) - i64(cost[i]);

        if (id == QueryId::kQ41) {
          if (cr[std::size_t(c)] != america_c || sr[std::size_t(s)] != america_s)
            continue;
          i32 m = pm[std::size_t(p)];
          if (m != m1 && m != m2) continue;
          groups[{year, cn[std::size_t(c)]}] += profit;
        } else if (id == QueryId::kQ42) {
          if (cr[std::size_t(c)] != america_c || sr[std::size_t(s)] != america_s)
            continue;
          i32 m = pm[std::size_t(p)];
          if (m != m1 && m != m2) continue;
          if (year != 1997 && year != 1998) continue;
          groups[{year, sn[std::size_t(s)], pc[std::size_t(p)]}] += profit;
        } else {
          if (cr[std::size_t(c)] != america_c) continue;
          if (sn[std::size_t(s)] != us) continue;
          if (pc[std::size_t(p)] != cat14) continue;
          if (year != 1997 && year != 1998) continue;
          groups[{year, sc[std::size_t(s)], pb[std::size_t(p)]}] += profit;
        }
      }
      if (id == QueryId::kQ41) return from_map(groups, {"d_year", "c_nation"});
      if (id == QueryId::kQ42)
        return from_map(groups, {"d_year", "s_nation", "p_category"});
      return from_map(groups, {"d_year", "s_city", "p_brand1"});
    }
  }
  throw ConfigError("unknown query id");
}

}  // namespace tq

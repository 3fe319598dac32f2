#pragma once

/**
 * Deterministic star-schema data generator. Cardinalities track the usual
 * scale-factor rules (lineorder 6M rows per SF, supplier 2k, customer 30k,
 * part 200k blocks); value domains are uniform within the ranges the query
 * predicates and selectivity assumptions need. String attributes are stored
 * dictionary-encoded; dictionaries are fixed canonical enumerations so codes
 * follow closed forms (nation = city/10, region = nation/5, category =
 * brand/40, mfgr = category/5).
 */

#include <string>
#include <vector>

#include "tq/column.hpp"

namespace tq {

struct SsbTable {
  std::string name;
  std::vector<Column> columns;

  i64 rows() const { return columns.empty() ? 0 : columns[0].length(); }

  const Column& column(const std::string& column_name) const;
  std::span<const i32> ints(const std::string& column_name) const {
    return column(column_name).as_i32();
  }
};

struct SsbDatabase {
  i64 scale_factor = 0;
  u64 seed = 0;
  SsbTable lineorder, date, supplier, customer, part;
  std::vector<Dictionary> dictionaries;

  const SsbTable& table(const std::string& table_name) const;
  const Dictionary& dict(const std::string& dict_name) const;
};

// Cardinality rules, exposed for tests.
i64 ssb_lineorder_rows(i64 sf);
i64 ssb_supplier_rows(i64 sf);
i64 ssb_customer_rows(i64 sf);
i64 ssb_part_rows(i64 sf);
inline constexpr i64 kSsbDateRows = 2556;  // calendar days from 1992-01-01

// Canonical dictionaries (shared by supplier and customer geography).
Dictionary ssb_region_dict(std::string name);
Dictionary ssb_nation_dict(std::string name);
Dictionary ssb_city_dict(std::string name);
Dictionary ssb_mfgr_dict();
Dictionary ssb_category_dict();
Dictionary ssb_brand_dict();
Dictionary ssb_yearmonth_dict();

SsbDatabase generate_ssb(i64 scale_factor, u64 seed);

}  // namespace tq

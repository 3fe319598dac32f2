#include "tq/ssb_gen.hpp"

#include <array>
#include <bit>

#include "tq/rng.hpp"

namespace tq {
namespace {

// Stream ids keep every column's PRNG independent of generation order.
enum TableId : u64 { kLineorder = 1, kDate, kSupplier, kCustomer, kPart };

constexpr std::array<const char*, 5> kRegions = {
    "AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"};

// Five nations per region so nation/5 = region.
constexpr std::array<const char*, 25> kNations = {
    "ALGERIA", "ETHIOPIA", "KENYA",   "MOROCCO", "MOZAMBIQUE",
    "ARGENTINA", "BRAZIL",   "CANADA", "PERU",    "UNITED STATES",
    "CHINA",   "INDIA",    "INDONESIA", "JAPAN", "VIETNAM",
    "FRANCE",  "GERMANY",  "ROMANIA", "RUSSIA",  "UNITED KINGDOM",
    "EGYPT",   "IRAN",     "IRAQ",    "JORDAN",  "SAUDI ARABIA"};

constexpr std::array<const char*, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

bool is_leap(int year) {
  return year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
}

int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) return 29;
  return kDays[std::size_t(month - 1)];
}

// City name = nation name padded or cut to 9 chars, then a digit 0-9.
std::string city_name(int city_code) {
  std::string base = kNations[std::size_t(city_code / 10)];
  base.resize(9, ' ');
  base.push_back(char('0' + city_code % 10));
  return base;
}

std::vector<i32> iota_keys(i64 rows) {
  std::vector<i32> keys(static_cast<std::size_t>(rows));
  for (i64 i = 0; i < rows; ++i) keys[std::size_t(i)] = i32(i + 1);
  return keys;
}

std::vector<i32> uniform_column(const Rng& rng, i64 rows, i32 lo, i32 hi) {
  std::vector<i32> v(static_cast<std::size_t>(rows));
  for (i64 i = 0; i < rows; ++i) v[std::size_t(i)] = rng.uniform_i32(u64(i), lo, hi);
  return v;
}

SsbTable make_date_table() {
  SsbTable t;
  t.name = "date";
  std::vector<i32> datekey, year, yearmonthnum, yearmonth, weeknum;
  datekey.reserve(kSsbDateRows);
  int y = 1992, m = 1, d = 1, doy = 1;
  for (i64 i = 0; i < kSsbDateRows; ++i) {
    datekey.push_back(y * 10000 + m * 100 + d);
    year.push_back(y);
    yearmonthnum.push_back(y * 100 + m);
    yearmonth.push_back((y - 1992) * 12 + (m - 1));
    weeknum.push_back((doy - 1) / 7 + 1);
    ++d;
    ++doy;
    if (d > days_in_month(y, m)) {
      d = 1;
      ++m;
      if (m > 12) {
        m = 1;
        ++y;
        doy = 1;
      }
    }
  }
  t.columns.push_back(Column::int32("d_datekey", std::move(datekey)));
  t.columns.push_back(Column::int32("d_year", std::move(year)));
  t.columns.push_back(Column::int32("d_yearmonthnum", std::move(yearmonthnum)));
  t.columns.push_back(Column::int32("d_yearmonth", std::move(yearmonth)));
  t.columns.push_back(Column::int32("d_weeknuminyear", std::move(weeknum)));
  return t;
}

// Supplier and customer share the geography layout: a uniform city code with
// nation and region derived by integer division.
SsbTable make_geo_table(const char* table_name, const char* key_name,
                        const char* prefix, TableId table_id, i64 rows,
                        u64 seed, i64 sf) {
  SsbTable t;
  t.name = table_name;
  Rng rng(seed, u64(sf), table_id, 0);
  std::vector<i32> city = uniform_column(rng, rows, 0, 249);
  std::vector<i32> nation(city.size()), region(city.size());
  for (std::size_t i = 0; i < city.size(); ++i) {
    nation[i] = city[i] / 10;
    region[i] = nation[i] / 5;
  }
  std::string p(prefix);
  t.columns.push_back(Column::int32(key_name, iota_keys(rows)));
  t.columns.push_back(Column::int32(p + "city", std::move(city)));
  t.columns.push_back(Column::int32(p + "nation", std::move(nation)));
  t.columns.push_back(Column::int32(p + "region", std::move(region)));
  return t;
}

SsbTable make_part_table(i64 rows, u64 seed, i64 sf) {
  SsbTable t;
  t.name = "part";
  Rng rng(seed, u64(sf), kPart, 0);
  std::vector<i32> brand = uniform_column(rng, rows, 0, 999);
  std::vector<i32> category(brand.size()), mfgr(brand.size());
  for (std::size_t i = 0; i < brand.size(); ++i) {
    category[i] = brand[i] / 40;
    mfgr[i] = category[i] / 5;
  }
  t.columns.push_back(Column::int32("p_partkey", iota_keys(rows)));
  t.columns.push_back(Column::int32("p_brand1", std::move(brand)));
  t.columns.push_back(Column::int32("p_category", std::move(category)));
  t.columns.push_back(Column::int32("p_mfgr", std::move(mfgr)));
  return t;
}

SsbTable make_lineorder_table(i64 rows, u64 seed, i64 sf,
                              std::span<const i32> date_keys, i64 customers,
                              i64 suppliers, i64 parts) {
  SsbTable t;
  t.name = "lineorder";
  auto gen = [&](u64 column_id, i32 lo, i32 hi) {
    Rng rng(seed, u64(sf), kLineorder, column_id);
    return uniform_column(rng, rows, lo, hi);
  };

  Rng date_rng(seed, u64(sf), kLineorder, 0);
  std::vector<i32> orderdate(static_cast<std::size_t>(rows));
  for (i64 i = 0; i < rows; ++i)
    orderdate[std::size_t(i)] =
        date_keys[std::size_t(date_rng.uniform_i32(u64(i), 0, i32(date_keys.size()) - 1))];

  t.columns.push_back(Column::int32("lo_orderdate", std::move(orderdate)));
  t.columns.push_back(Column::int32("lo_custkey", gen(1, 1, i32(customers))));
  t.columns.push_back(Column::int32("lo_suppkey", gen(2, 1, i32(suppliers))));
  t.columns.push_back(Column::int32("lo_partkey", gen(3, 1, i32(parts))));
  t.columns.push_back(Column::int32("lo_quantity", gen(4, 1, 50)));
  t.columns.push_back(Column::int32("lo_discount", gen(5, 0, 10)));
  t.columns.push_back(Column::int32("lo_extendedprice", gen(6, 1, 100000)));
  t.columns.push_back(Column::int32("lo_revenue", gen(7, 1, 1000000)));
  t.columns.push_back(Column::int32("lo_supplycost", gen(8, 1, 100000)));
  return t;
}

}  // namespace

const Column& SsbTable::column(const std::string& column_name) const {
  for (const Column& c : columns)
    if (c.name == column_name) return c;
  throw ContractError("table " + name + ": no column " + column_name);
}

const SsbTable& SsbDatabase::table(const std::string& table_name) const {
  for (const SsbTable* t : {&lineorder, &date, &supplier, &customer, &part})
    if (t->name == table_name) return *t;
  throw ContractError("no table named " + table_name);
}

const Dictionary& SsbDatabase::dict(const std::string& dict_name) const {
  for (const Dictionary& d : dictionaries)
    if (d.name == dict_name) return d;
  throw ContractError("no dictionary named " + dict_name);
}

i64 ssb_lineorder_rows(i64 sf) { return 6'000'000 * sf; }
i64 ssb_supplier_rows(i64 sf) { return 2'000 * sf; }
i64 ssb_customer_rows(i64 sf) { return 30'000 * sf; }

i64 ssb_part_rows(i64 sf) {
  // 200k * floor(1 + log2(sf)), which is 200k * bit_width(sf).
  return 200'000 * i64(std::bit_width(u64(sf)));
}

Dictionary ssb_region_dict(std::string name) {
  Dictionary d;
  d.name = std::move(name);
  d.entries.assign(kRegions.begin(), kRegions.end());
  return d;
}

Dictionary ssb_nation_dict(std::string name) {
  Dictionary d;
  d.name = std::move(name);
  d.entries.assign(kNations.begin(), kNations.end());
  return d;
}

Dictionary ssb_city_dict(std::string name) {
  Dictionary d;
  d.name = std::move(name);
  for (int c = 0; c < 250; ++c) d.entries.push_back(city_name(c));
  return d;
}

Dictionary ssb_mfgr_dict() {
  Dictionary d;
  d.name = "p_mfgr";
  for (int m = 1; m <= 5; ++m) d.entries.push_back("MFGR#" + std::to_string(m));
  return d;
}

Dictionary ssb_category_dict() {
  Dictionary d;
  d.name = "p_category";
  for (int m = 1; m <= 5; ++m)
    for (int c = 1; c <= 5; ++c)
      d.entries.push_back("MFGR#" + std::to_string(m) + std::to_string(c));
  return d;
}

Dictionary ssb_brand_dict() {
  Dictionary d;
  d.name = "p_brand1";
  Dictionary cat = ssb_category_dict();
  for (const std::string& c : cat.entries)
    for (int b = 1; b <= 40; ++b) d.entries.push_back(c + std::to_string(b));
  return d;
}

Dictionary ssb_yearmonth_dict() {
  Dictionary d;
  d.name = "d_yearmonth";
  for (int y = 1992; y <= 1998; ++y)
    for (int m = 0; m < 12; ++m)
      d.entries.push_back(std::string(kMonths[std::size_t(m)]) + std::to_string(y));
  return d;
}

SsbDatabase generate_ssb(i64 scale_factor, u64 seed) {
  TQ_CONFIG_CHECK(scale_factor >= 1, "scale factor must be >= 1");

  SsbDatabase db;
  db.scale_factor = scale_factor;
  db.seed = seed;

  db.date = make_date_table();
  db.supplier =
      make_geo_table("supplier", "s_suppkey", "s_", kSupplier,
                     ssb_supplier_rows(scale_factor), seed, scale_factor);
  db.customer =
      make_geo_table("customer", "c_custkey", "c_", kCustomer,
                     ssb_customer_rows(scale_factor), seed, scale_factor);
  db.part = make_part_table(ssb_part_rows(scale_factor), seed, scale_factor);

  db.lineorder = make_lineorder_table(
      ssb_lineorder_rows(scale_factor), seed, scale_factor,
      db.date.ints("d_datekey"), db.customer.rows(), db.supplier.rows(),
      db.part.rows());

  db.dictionaries = {ssb_region_dict("s_region"), ssb_nation_dict("s_nation"),
                     ssb_city_dict("s_city"),     ssb_region_dict("c_region"),
                     ssb_nation_dict("c_nation"), ssb_city_dict("c_city"),
                     ssb_mfgr_dict(),             ssb_category_dict(),
                     ssb_brand_dict(),            ssb_yearmonth_dict()};
  return db;
}

}  // namespace tq

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace olap::tpch {

/// Days since 1970-01-01 for a proleptic Gregorian date.
constexpr int32_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int32_t>(doe) - 719468;
}

// Seven-year date domain, 1992-01-01 .. 1998-12-31.
inline constexpr int32_t kStartDate = days_from_civil(1992, 1, 1);
inline constexpr int32_t kEndDate = days_from_civil(1998, 12, 31);
static_assert(kStartDate == 8035 && kEndDate == 10591);

/// Dictionary-encoded categorical domains; code = index into the list.
const std::vector<std::string>& mktsegment_dictionary();  // 5
const std::vector<std::string>& returnflag_dictionary();  // 3
const std::vector<std::string>& shipmode_dictionary();    // 7
const std::vector<std::string>& shipinstruct_dictionary();  // 4
const std::vector<std::string>& brand_dictionary();       // 25
const std::vector<std::string>& container_dictionary();   // 40

/// Code of `value` in `dict`; throws std::out_of_range when absent.
int32_t encode(const std::vector<std::string>& dict, std::string_view value);

struct CustomerTable {
  std::vector<int32_t> custkey;
  std::vector<int32_t> mktsegment;
  std::vector<int32_t> nationkey;
  std::size_t rows() const { return custkey.size(); }
};

struct OrdersTable {
  std::vector<int32_t> orderkey;
  std::vector<int32_t> custkey;
  std::vector<int32_t> orderdate;
  std::size_t rows() const { return orderkey.size(); }
};

struct LineitemTable {
  std::vector<int32_t> orderkey;
  std::vector<int32_t> partkey;
  std::vector<int32_t> quantity;
  std::vector<int32_t> shipdate;
  std::vector<int32_t> commitdate;
  std::vector<int32_t> receiptdate;
  std::vector<int32_t> shipmode;
  std::vector<int32_t> shipinstruct;
  std::vector<int32_t> returnflag;
  std::size_t rows() const { return orderkey.size(); }
};

struct PartTable {
  std::vector<int32_t> partkey;
  std::vector<int32_t> brand;
  std::vector<int32_t> container;
  std::vector<int32_t> size;
  std::size_t rows() const { return partkey.size(); }
};

/// Integer-only TPC-H subset. Primary keys are dense (1..rows) and FK-closed.
struct TpchLiteDB {
  CustomerTable customer;
  OrdersTable orders;
  LineitemTable lineitem;
  PartTable part;
};

/// Row counts: customer 150000*sf, orders 1500000*sf, part 200000*sf (rounded, at least 1);
/// 1..7 lineitems per order, so lineitem is about 6000000*sf.
TpchLiteDB generate_tpch_lite(double scale_factor, uint64_t seed);

/// One little-endian int32 file per column plus manifest.json.
void write_tpch_lite(const std::filesystem::path& dir, const TpchLiteDB& db);
TpchLiteDB read_tpch_lite(const std::filesystem::path& dir);

}  // namespace olap::tpch

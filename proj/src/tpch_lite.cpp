#include "olap/tpch_lite.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include <json.hpp>

#include "olap/errors.hpp"
#include "olap/random.hpp"

namespace olap::tpch {

namespace {

std::vector<std::string> make_containers() {
  std::vector<std::string> out;
  for (const char* size : {"SM", "LG", "MED", "JUMBO", "WRAP"}) {
    for (const char* kind : {"CASE", "BOX", "BAG", "JAR", "PKG", "PACK", "CAN", "DRUM"}) {
      out.push_back(std::string(size) + " " + kind);
    }
  }
  return out;
}

std::vector<std::string> make_brands() {
  std::vector<std::string> out;
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 5; ++n) out.push_back("Brand#" + std::to_string(m * 10 + n));
  }
  return out;
}

std::size_t scaled(double base, double sf) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(base * sf)));
}

template <typename Column>
struct TableRef {
  std::string name;
  std::vector<std::pair<std::string, Column*>> columns;
};

// Db is TpchLiteDB or const TpchLiteDB.
template <typename Db>
auto table_refs(Db& db) {
  using Column = std::conditional_t<std::is_const_v<Db>, const std::vector<int32_t>, std::vector<int32_t>>;
  return std::vector<TableRef<Column>>{
      {"customer",
       {{"custkey", &db.customer.custkey}, {"mktsegment", &db.customer.mktsegment}, {"nationkey", &db.customer.nationkey}}},
      {"orders", {{"orderkey", &db.orders.orderkey}, {"custkey", &db.orders.custkey}, {"orderdate", &db.orders.orderdate}}},
      {"lineitem",
       {{"orderkey", &db.lineitem.orderkey},
        {"partkey", &db.lineitem.partkey},
        {"quantity", &db.lineitem.quantity},
        {"shipdate", &db.lineitem.shipdate},
        {"commitdate", &db.lineitem.commitdate},
        {"receiptdate", &db.lineitem.receiptdate},
        {"shipmode", &db.lineitem.shipmode},
        {"shipinstruct", &db.lineitem.shipinstruct},
        {"returnflag", &db.lineitem.returnflag}}},
      {"part",
       {{"partkey", &db.part.partkey}, {"brand", &db.part.brand}, {"container", &db.part.container}, {"size", &db.part.size}}},
  };
}

const std::vector<std::string>* dictionary_for(const std::string& column) {
  if (column == "mktsegment") return &mktsegment_dictionary();
  if (column == "returnflag") return &returnflag_dictionary();
  if (column == "shipmode") return &shipmode_dictionary();
  if (column == "shipinstruct") return &shipinstruct_dictionary();
  if (column == "brand") return &brand_dictionary();
  if (column == "container") return &container_dictionary();
  return nullptr;
}

}  // namespace

const std::vector<std::string>& mktsegment_dictionary() {
  static const std::vector<std::string> d{"AUTOMOBILE", "BUILDING", "FURNITURE", "HOUSEHOLD", "MACHINERY"};
  return d;
}
const std::vector<std::string>& returnflag_dictionary() {
  static const std::vector<std::string> d{"A", "N", "R"};
  return d;
}
const std::vector<std::string>& shipmode_dictionary() {
  static const std::vector<std::string> d{"AIR", "FOB", "MAIL", "RAIL", "REG AIR", "SHIP", "TRUCK"};
  return d;
}
const std::vector<std::string>& shipinstruct_dictionary() {
  static const std::vector<std::string> d{"COLLECT COD", "DELIVER IN PERSON", "NONE", "TAKE BACK RETURN"};
  return d;
}
const std::vector<std::string>& brand_dictionary() {
  static const std::vector<std::string> d = make_brands();
  return d;
}
const std::vector<std::string>& container_dictionary() {
  static const std::vector<std::string> d = make_containers();
  return d;
}

int32_t encode(const std::vector<std::string>& dict, std::string_view value) {
  for (std::size_t i = 0; i < dict.size(); ++i) {
    if (dict[i] == value) return static_cast<int32_t>(i);
  }
  throw std::out_of_range("value not in dictionary: " + std::string(value));
}

TpchLiteDB generate_tpch_lite(double scale_factor, uint64_t seed) {
  if (!(scale_factor > 0)) throw ConfigError("scale factor must be positive");

  TpchLiteDB db;
  const std::size_t n_customer = scaled(150000, scale_factor);
  const std::size_t n_orders = scaled(1500000, scale_factor);
  const std::size_t n_part = scaled(200000, scale_factor);

  SplitMix64 rng_c(derive_seed(seed, 10));
  auto& c = db.customer;
  c.custkey.resize(n_customer);
  c.mktsegment.resize(n_customer);
  c.nationkey.resize(n_customer);
  for (std::size_t i = 0; i < n_customer; ++i) {
    c.custkey[i] = static_cast<int32_t>(i + 1);
    c.mktsegment[i] = static_cast<int32_t>(rng_c.below(mktsegment_dictionary().size()));
    c.nationkey[i] = static_cast<int32_t>(rng_c.below(25));
  }

  SplitMix64 rng_p(derive_seed(seed, 11));
  auto& p = db.part;
  p.partkey.resize(n_part);
  p.brand.resize(n_part);
  p.container.resize(n_part);
  p.size.resize(n_part);
  for (std::size_t i = 0; i < n_part; ++i) {
    p.partkey[i] = static_cast<int32_t>(i + 1);
    p.brand[i] = static_cast<int32_t>(rng_p.below(brand_dictionary().size()));
    p.container[i] = static_cast<int32_t>(rng_p.below(container_dictionary().size()));
    p.size[i] = static_cast<int32_t>(rng_p.between(1, 50));
  }

  // Order dates leave room for the ship/commit/receipt offsets inside the date domain.
  SplitMix64 rng_o(derive_seed(seed, 12));
  SplitMix64 rng_l(derive_seed(seed, 13));
  auto& o = db.orders;
  auto& l = db.lineitem;
  o.orderkey.resize(n_orders);
  o.custkey.resize(n_orders);
  o.orderdate.resize(n_orders);
  l.orderkey.reserve(n_orders * 4);
  for (std::size_t i = 0; i < n_orders; ++i) {
    const auto orderkey = static_cast<int32_t>(i + 1);
    const auto orderdate = static_cast<int32_t>(rng_o.between(kStartDate, kEndDate - 151));
    o.orderkey[i] = orderkey;
    o.custkey[i] = static_cast<int32_t>(rng_o.between(1, static_cast<int64_t>(n_customer)));
    o.orderdate[i] = orderdate;

    const int64_t items = rng_l.between(1, 7);
    for (int64_t k = 0; k < items; ++k) {
      const auto shipdate = static_cast<int32_t>(orderdate + rng_l.between(1, 121));
      l.orderkey.push_back(orderkey);
      l.partkey.push_back(static_cast<int32_t>(rng_l.between(1, static_cast<int64_t>(n_part))));
      l.quantity.push_back(static_cast<int32_t>(rng_l.between(1, 50)));
      l.shipdate.push_back(shipdate);
      l.commitdate.push_back(static_cast<int32_t>(orderdate + rng_l.between(30, 90)));
      l.receiptdate.push_back(static_cast<int32_t>(shipdate + rng_l.between(1, 30)));
      l.shipmode.push_back(static_cast<int32_t>(rng_l.below(shipmode_dictionary().size())));
      l.shipinstruct.push_back(static_cast<int32_t>(rng_l.below(shipinstruct_dictionary().size())));
      l.returnflag.push_back(static_cast<int32_t>(rng_l.below(returnflag_dictionary().size())));
    }
  }
  return db;
}

void write_tpch_lite(const std::filesystem::path& dir, const TpchLiteDB& db) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "olap-tpch-lite-1";
  manifest["tables"] = nlohmann::json::array();
  for (const auto& table : table_refs(db)) {
    nlohmann::json jt;
    jt["table"] = table.name;
    jt["rows"] = table.columns.front().second->size();
    jt["columns"] = nlohmann::json::array();
    for (const auto& [name, data] : table.columns) {
      const std::string file = table.name + "." + name + ".i32";
      std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
      out.write(reinterpret_cast<const char*>(data->data()), static_cast<std::streamsize>(data->size() * sizeof(int32_t)));
      if (!out) throw std::runtime_error("write failed for " + (dir / file).string());

      nlohmann::json jc;
      jc["column"] = name;
      jc["file"] = file;
      jc["rows"] = data->size();
      jc["encoding"] = "int32-le";
      if (const auto* dict = dictionary_for(name)) {
        jc["dictionary"] = *dict;
      } else {
        jc["dictionary"] = nullptr;
      }
      jt["columns"].push_back(jc);
    }
    manifest["tables"].push_back(jt);
  }
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for manifest.json");
}

TpchLiteDB read_tpch_lite(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest.json: ") + e.what());
  }

  TpchLiteDB db;
  for (auto& table : table_refs(db)) {
    const nlohmann::json* jt = nullptr;
    for (const auto& candidate : manifest.at("tables")) {
      if (candidate.at("table") == table.name) jt = &candidate;
    }
    if (jt == nullptr) throw FormatError("manifest.json: missing table " + table.name);
    for (auto& [name, data] : table.columns) {
      const nlohmann::json* jc = nullptr;
      for (const auto& candidate : jt->at("columns")) {
        if (candidate.at("column") == name) jc = &candidate;
      }
      if (jc == nullptr) throw FormatError("manifest.json: missing column " + table.name + "." + name);
      const auto rows = jc->at("rows").get<std::size_t>();
      const auto path = dir / jc->at("file").get<std::string>();
      if (std::filesystem::file_size(path) != rows * sizeof(int32_t)) {
        throw FormatError(path.string() + ": size does not match manifest row count");
      }
      data->resize(rows);
      std::ifstream col(path, std::ios::binary);
      col.read(reinterpret_cast<char*>(data->data()), static_cast<std::streamsize>(rows * sizeof(int32_t)));
      if (!col) throw FormatError(path.string() + ": truncated");
    }
  }
  return db;
}

}  // namespace olap::tpch

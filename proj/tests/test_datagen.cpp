#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_set>

#include "olap/datagen.hpp"
#include "olap/errors.hpp"
#include "olap/random.hpp"
#include "olap/tpch_lite.hpp"

namespace fs = std::filesystem;
using namespace olap;

namespace {

fs::path temp_path(const std::string& name) {
  auto dir = fs::temp_directory_path() / "olap_tests";
  fs::create_directories(dir);
  return dir / name;
}

/// Upper chi-square quantile at alpha = 0.001 (Wilson-Hilferty).
double chi2_critical(double df) {
  const double z = 3.0902;
  const double a = 2.0 / (9.0 * df);
  return df * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

}  // namespace

TEST(SplitMix64, KnownSequence) {
  // Reference values of SplitMix64 seeded with 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(SplitMix64, BelowStaysInRange) {
  SplitMix64 rng(7);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.below(13), 13u);
}

TEST(FkPair, SmallInstanceIsPermutationAndClosed) {
  const FkPair fk = generate_fk_pair(4, 8, 1);
  std::multiset<uint32_t> keys;
  for (const auto& t : fk.build.tuples) keys.insert(t.key);
  EXPECT_EQ(keys, (std::multiset<uint32_t>{1, 2, 3, 4}));
  ASSERT_EQ(fk.probe.cardinality(), 8u);
  for (const auto& t : fk.probe.tuples) {
    EXPECT_GE(t.key, 1u);
    EXPECT_LE(t.key, 4u);
  }
}

TEST(FkPair, SingleKey) {
  const FkPair fk = generate_fk_pair(1, 5, 3);
  ASSERT_EQ(fk.build.cardinality(), 1u);
  EXPECT_EQ(fk.build.tuples[0].key, 1u);
  ASSERT_EQ(fk.probe.cardinality(), 5u);
  for (const auto& t : fk.probe.tuples) EXPECT_EQ(t.key, 1u);
}

TEST(FkPair, PayloadEqualsKey) {
  const FkPair fk = generate_fk_pair(100, 300, 5);
  for (const auto& t : fk.build.tuples) EXPECT_EQ(t.payload, t.key);
  for (const auto& t : fk.probe.tuples) EXPECT_EQ(t.payload, t.key);
}

TEST(FkPair, ZeroBuildIsError) { EXPECT_THROW(generate_fk_pair(0, 5, 1), ConfigError); }

TEST(FkPair, Deterministic) {
  const FkPair a = generate_fk_pair(1000, 4000, 99);
  const FkPair b = generate_fk_pair(1000, 4000, 99);
  const FkPair c = generate_fk_pair(1000, 4000, 100);
  EXPECT_EQ(a.build, b.build);
  EXPECT_EQ(a.probe, b.probe);
  EXPECT_NE(a.build, c.build);
}

TEST(FkPair, MegabyteSizing) {
  EXPECT_EQ(tuples_for_megabytes(100), 13107200u);
  EXPECT_EQ(tuples_for_megabytes(400), 52428800u);
  EXPECT_EQ(sizeof(Tuple), 8u);
}

TEST(FkPair, ProbeKeysSubsetOfBuild) {
  const FkPair fk = generate_fk_pair(50000, 200000, 11);
  std::unordered_set<uint32_t> keys;
  for (const auto& t : fk.build.tuples) keys.insert(t.key);
  EXPECT_EQ(keys.size(), 50000u);
  for (const auto& t : fk.probe.tuples) ASSERT_TRUE(keys.count(t.key));
}

TEST(FkPair, ProbeFrequenciesUniform) {
  const uint64_t n = 1000, m = 1'000'000;
  const FkPair fk = generate_fk_pair(n, m, 21);
  std::vector<double> freq(n + 1, 0);
  for (const auto& t : fk.probe.tuples) freq[t.key] += 1;
  const double expect = static_cast<double>(m) / n;
  double chi = 0;
  for (uint64_t k = 1; k <= n; ++k) chi += (freq[k] - expect) * (freq[k] - expect) / expect;
  EXPECT_LT(chi, chi2_critical(n - 1));
}

TEST(FkPair, BuildPositionsUniform) {
  // Keys of each position block spread evenly over key ranges.
  const uint64_t n = 1'000'000, blocks = 50;
  const FkPair fk = generate_fk_pair(n, 0, 22);
  std::vector<double> cells(blocks * blocks, 0);
  for (uint64_t i = 0; i < n; ++i) {
    const uint64_t pb = i * blocks / n;
    const uint64_t kb = (fk.build.tuples[i].key - 1) * blocks / n;
    cells[pb * blocks + kb] += 1;
  }
  const double expect = static_cast<double>(n) / (blocks * blocks);
  double chi = 0;
  for (double c : cells) chi += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi, chi2_critical(static_cast<double>((blocks - 1) * (blocks - 1))));
}

TEST(Column, EmptyAndDeterministic) {
  EXPECT_EQ(generate_column(0, 1).length(), 0u);
  const Column8 a = generate_column(8, 5);
  const Column8 b = generate_column(8, 5);
  ASSERT_EQ(a.length(), 8u);
  EXPECT_TRUE(std::equal(a.view().begin(), a.view().end(), b.view().begin()));
}

TEST(Column, HalfBelow128) {
  const Column8 c = generate_column(uint64_t{1} << 26, 77);
  uint64_t low = 0;
  for (uint8_t v : c.view()) low += v <= 127;
  EXPECT_NEAR(static_cast<double>(low) / static_cast<double>(c.length()), 0.5, 0.001);
}

TEST(RelationFile, RoundTrip) {
  const FkPair fk = generate_fk_pair(1234, 10, 4);
  const auto path = temp_path("rt.rel");
  write_relation(path, fk.build);
  EXPECT_EQ(fs::file_size(path), 16u + 1234u * 8u);
  EXPECT_EQ(read_relation(path), fk.build);
}

TEST(RelationFile, EmptyIsHeaderOnly) {
  const auto path = temp_path("empty.rel");
  write_relation(path, Relation{});
  EXPECT_EQ(fs::file_size(path), 16u);
  EXPECT_EQ(read_relation(path).cardinality(), 0u);
}

TEST(RelationFile, HeaderLayout) {
  const auto path = temp_path("hdr.rel");
  write_relation(path, Relation({{7, 9}}));
  std::ifstream in(path, std::ios::binary);
  char bytes[24];
  in.read(bytes, 24);
  EXPECT_EQ(std::string(bytes, 8), "OLAPREL1");
  EXPECT_EQ(static_cast<uint8_t>(bytes[8]), 1);
  for (int i = 9; i < 16; ++i) EXPECT_EQ(bytes[i], 0);
  EXPECT_EQ(static_cast<uint8_t>(bytes[16]), 7);
  EXPECT_EQ(static_cast<uint8_t>(bytes[20]), 9);
}

TEST(RelationFile, TruncatedIsFormatError) {
  const FkPair fk = generate_fk_pair(100, 0, 4);
  const auto path = temp_path("trunc.rel");
  write_relation(path, fk.build);
  fs::resize_file(path, 16 + 99 * 8 + 3);
  EXPECT_THROW(read_relation(path), FormatError);
  fs::resize_file(path, 10);
  EXPECT_THROW(read_relation(path), FormatError);
}

TEST(RelationFile, BadMagicIsFormatError) {
  const auto path = temp_path("magic.rel");
  std::ofstream(path, std::ios::binary) << "NOTAREL1" << std::string(8, '\0');
  EXPECT_THROW(read_relation(path), FormatError);
}

TEST(TpchLite, Cardinalities) {
  const auto db = tpch::generate_tpch_lite(0.01, 1);
  EXPECT_EQ(db.customer.rows(), 1500u);
  EXPECT_EQ(db.orders.rows(), 15000u);
  EXPECT_EQ(db.part.rows(), 2000u);
  EXPECT_NEAR(static_cast<double>(db.lineitem.rows()), 60000.0, 1500.0);
}

TEST(TpchLite, ForeignKeysClosed) {
  const auto db = tpch::generate_tpch_lite(0.1, 2);
  std::unordered_set<int32_t> cust(db.customer.custkey.begin(), db.customer.custkey.end());
  std::unordered_set<int32_t> orders(db.orders.orderkey.begin(), db.orders.orderkey.end());
  std::unordered_set<int32_t> parts(db.part.partkey.begin(), db.part.partkey.end());
  for (int32_t k : db.orders.custkey) ASSERT_TRUE(cust.count(k));
  for (int32_t k : db.lineitem.orderkey) ASSERT_TRUE(orders.count(k));
  for (int32_t k : db.lineitem.partkey) ASSERT_TRUE(parts.count(k));
}

TEST(TpchLite, DomainsAndDictionaries) {
  EXPECT_EQ(tpch::mktsegment_dictionary().size(), 5u);
  EXPECT_EQ(tpch::returnflag_dictionary().size(), 3u);
  EXPECT_EQ(tpch::shipmode_dictionary().size(), 7u);
  EXPECT_EQ(tpch::brand_dictionary().size(), 25u);
  EXPECT_EQ(tpch::container_dictionary().size(), 40u);
  const auto db = tpch::generate_tpch_lite(0.01, 3);
  for (int32_t d : db.orders.orderdate) {
    EXPECT_GE(d, tpch::kStartDate);
    EXPECT_LE(d, tpch::kEndDate);
  }
  for (std::size_t i = 0; i < db.lineitem.rows(); ++i) {
    EXPECT_LE(db.lineitem.receiptdate[i], tpch::kEndDate);
    EXPECT_LT(db.lineitem.shipdate[i], db.lineitem.receiptdate[i]);
    EXPECT_LT(db.lineitem.shipmode[i], 7);
    EXPECT_LT(db.lineitem.returnflag[i], 3);
  }
  for (int32_t s : db.customer.mktsegment) EXPECT_LT(s, 5);
  for (int32_t b : db.part.brand) EXPECT_LT(b, 25);
  for (int32_t c : db.part.container) EXPECT_LT(c, 40);
}

TEST(TpchLite, Q12ShipmodeSelectivity) {
  const auto db = tpch::generate_tpch_lite(0.1, 4);
  const int32_t mail = tpch::encode(tpch::shipmode_dictionary(), "MAIL");
  const int32_t ship = tpch::encode(tpch::shipmode_dictionary(), "SHIP");
  uint64_t hits = 0;
  for (int32_t m : db.lineitem.shipmode) hits += m == mail || m == ship;
  EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(db.lineitem.rows()), 2.0 / 7.0, 0.01);
}

TEST(TpchLite, PersistenceRoundTrip) {
  const auto db = tpch::generate_tpch_lite(0.002, 5);
  const auto dir = temp_path("tpch_rt");
  fs::remove_all(dir);
  tpch::write_tpch_lite(dir, db);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "lineitem.shipmode.i32"));
  const auto back = tpch::read_tpch_lite(dir);
  EXPECT_EQ(back.lineitem.shipdate, db.lineitem.shipdate);
  EXPECT_EQ(back.orders.custkey, db.orders.custkey);
  EXPECT_EQ(back.part.container, db.part.container);
  EXPECT_EQ(back.customer.mktsegment, db.customer.mktsegment);
}

TEST(TpchLite, Deterministic) {
  const auto a = tpch::generate_tpch_lite(0.003, 9);
  const auto b = tpch::generate_tpch_lite(0.003, 9);
  EXPECT_EQ(a.lineitem.partkey, b.lineitem.partkey);
  EXPECT_EQ(a.orders.orderdate, b.orders.orderdate);
}

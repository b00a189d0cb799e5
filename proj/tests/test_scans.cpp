#include <gtest/gtest.h>

#include "olap/datagen.hpp"
#include "olap/errors.hpp"
#include "olap/scans.hpp"

using namespace olap;

namespace {

Column8 column_of(std::initializer_list<uint8_t> v) { return make_column(std::vector<uint8_t>(v)); }

}  // namespace

TEST(Scan, BitvectorTrivial) {
  const Column8 c = column_of({5, 10, 15});
  const BitVector b = scan_bitvector(c, {10, 20}, 1);
  EXPECT_EQ(b.length_bits, 3u);
  EXPECT_EQ(b.words[0], 0b110u);
}

TEST(Scan, IndexesTrivial) {
  const Column8 c = column_of({5, 10, 15});
  EXPECT_EQ(scan_indexes(c, {10, 20}, 1).flatten(), (std::vector<uint64_t>{1, 2}));
  EXPECT_TRUE(scan_indexes(c, {0, 4}, 2).flatten().empty());
}

TEST(Scan, EmptyColumn) {
  const Column8 c;
  EXPECT_EQ(scan_bitvector(c, {0, 255}, 4).popcount(), 0u);
  EXPECT_EQ(scan_indexes(c, {0, 255}, 4).count(), 0u);
}

TEST(Scan, InvertedPredicateIsError) {
  const Column8 c = column_of({1});
  EXPECT_THROW(scan_bitvector(c, {9, 3}, 1), ConfigError);
}

TEST(Scan, SelectivityPredicate) {
  EXPECT_EQ(ScanPredicate::for_selectivity(0.5).upper, 127);
  EXPECT_EQ(ScanPredicate::for_selectivity(1.0).upper, 255);
  EXPECT_EQ(ScanPredicate::for_selectivity(0.01).upper, 2);
  EXPECT_THROW(ScanPredicate::for_selectivity(0.0), ConfigError);
}

TEST(Scan, MatchesScalarAcrossThreadsAndLengths) {
  for (uint64_t n : {1u, 63u, 64u, 65u, 1000u, 4097u, 100'003u}) {
    const Column8 c = generate_column(n, n);
    for (ScanPredicate p : {ScanPredicate{0, 127}, ScanPredicate{17, 18}, ScanPredicate{200, 255}, ScanPredicate{0, 255}}) {
      const BitVector ref = scan_bitvector_scalar(c.view(), p);
      const auto ref_idx = scan_indexes_scalar(c.view(), p);
      for (unsigned t : {1u, 2u, 3u, 5u, 16u}) {
        const BitVector b = scan_bitvector(c, p, t);
        ASSERT_TRUE(std::equal(ref.words.begin(), ref.words.end(), b.words.begin())) << n << " t=" << t;
        ASSERT_EQ(scan_indexes(c, p, t).flatten(), ref_idx) << n << " t=" << t;
      }
    }
  }
}

TEST(Scan, IndexSegmentsIncreasing) {
  const Column8 c = generate_column(50'000, 2);
  const IndexVector iv = scan_indexes(c, {0, 63}, 7);
  for (const auto& seg : iv.segments) {
    for (uint64_t i = 1; i < seg.count; ++i) ASSERT_LT(iv.slots[seg.begin + i - 1], iv.slots[seg.begin + i]);
    for (uint64_t i = 0; i < seg.count; ++i) ASSERT_LT(iv.slots[seg.begin + i], c.length());
  }
}

TEST(Scan, LazyOutputBuffers) {
  const Column8 c = generate_column(10'000, 3);
  BitVector b(c.length(), AllocMode::lazy);
  scan_bitvector(c, {0, 127}, 2, b);
  IndexVector iv(c.length(), AllocMode::lazy);
  scan_indexes(c, {0, 127}, 2, iv);
  EXPECT_EQ(b.popcount(), iv.count());
}

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "olap/datagen.hpp"
#include "olap/errors.hpp"
#include "olap/histogram.hpp"
#include "olap/partition.hpp"
#include "olap/random.hpp"
#include "oracles.hpp"

using namespace olap;
using olap::testing::relation_of;
using olap::testing::sorted_keys;

namespace {

const KernelVariant kVariants[] = {KernelVariant::naive, KernelVariant::unrolled8, KernelVariant::simd32};

std::vector<Tuple> random_tuples(std::size_t n, uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Tuple> out(n);
  for (auto& t : out) t = {static_cast<uint32_t>(rng.next()), static_cast<uint32_t>(rng.next())};
  return out;
}

}  // namespace

TEST(KernelVariant, ParseAndPrint) {
  for (auto v : kVariants) EXPECT_EQ(parse_kernel_variant(to_string(v)), v);
  EXPECT_THROW(parse_kernel_variant("fast"), ConfigError);
}

TEST(Histogram, Trivial) {
  for (auto v : kVariants) {
    const Relation r = relation_of({0, 1, 2, 3});
    const Histogram h = compute_histogram(r.view(), 2, 0, v);
    EXPECT_EQ(h.bins, (std::vector<uint64_t>{1, 1, 1, 1})) << to_string(v);
    EXPECT_EQ(h.mask, 3u);
  }
}

TEST(Histogram, AllSameKey) {
  for (auto v : kVariants) {
    Relation r;
    r.tuples.assign(37, Tuple{5, 0});
    const Histogram h = compute_histogram(r.view(), 2, 0, v);
    EXPECT_EQ(h.bins, (std::vector<uint64_t>{0, 37, 0, 0})) << to_string(v);
  }
}

TEST(Histogram, MaskAndShift) {
  const Relation r = relation_of({0x10, 0x20, 0x30});
  const Histogram h = compute_histogram(r.view(), 2, 4, KernelVariant::naive);
  EXPECT_EQ(h.mask, 0x30u);
  EXPECT_EQ(h.bins, (std::vector<uint64_t>{0, 1, 1, 1}));
  EXPECT_EQ(h.total(), 3u);
}

TEST(Histogram, TooManyBitsIsError) {
  const Relation r = relation_of({1});
  EXPECT_THROW(compute_histogram(r.view(), 8, 25, KernelVariant::naive), ConfigError);
}

TEST(Histogram, VariantsAgreeOnMillionKeys) {
  const auto data = random_tuples(1'000'000, 3);
  const Histogram ref = compute_histogram(data, 12, 3, KernelVariant::naive);
  EXPECT_EQ(ref.total(), data.size());
  EXPECT_EQ(compute_histogram(data, 12, 3, KernelVariant::unrolled8).bins, ref.bins);
  EXPECT_EQ(compute_histogram(data, 12, 3, KernelVariant::simd32).bins, ref.bins);
}

TEST(Histogram, VariantsAgreeOnOddLengths) {
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 32u, 33u, 65u, 1000u}) {
    const auto data = random_tuples(n, n);
    const auto ref = compute_histogram(data, 5, 7, KernelVariant::naive);
    EXPECT_EQ(compute_histogram(data, 5, 7, KernelVariant::unrolled8).bins, ref.bins) << n;
    EXPECT_EQ(compute_histogram(data, 5, 7, KernelVariant::simd32).bins, ref.bins) << n;
  }
}

TEST(RadixPartition, SmallExample) {
  const Relation r = relation_of({3, 1, 2, 0});
  const auto p = radix_partition(r.view(), 1, 0, 1, KernelVariant::naive);
  EXPECT_EQ(p.offsets, (std::vector<uint64_t>{0, 2, 4}));
  EXPECT_EQ(sorted_keys(p.partition(0)), sorted_keys(relation_of({2, 0}).view()));
  EXPECT_EQ(sorted_keys(p.partition(1)), sorted_keys(relation_of({3, 1}).view()));
}

TEST(RadixPartition, Empty) {
  const auto p = radix_partition({}, 3, 0, 2, KernelVariant::naive);
  ASSERT_EQ(p.offsets.size(), 9u);
  for (auto o : p.offsets) EXPECT_EQ(o, 0u);
}

TEST(RadixPartition, DigitPredicateAndPermutation) {
  const auto data = random_tuples(100'000, 8);
  for (unsigned threads : {1u, 2u, 3u, 8u}) {
    for (auto v : kVariants) {
      const auto p = radix_partition(data, 6, 5, threads, v);
      ASSERT_EQ(p.partition_count(), 64u);
      EXPECT_EQ(p.offsets.front(), 0u);
      EXPECT_EQ(p.offsets.back(), data.size());
      EXPECT_TRUE(std::is_sorted(p.offsets.begin(), p.offsets.end()));
      for (std::size_t q = 0; q < p.partition_count(); ++q) {
        for (const auto& t : p.partition(q)) ASSERT_EQ((t.key >> 5) & 63u, q);
      }
      EXPECT_EQ(sorted_keys(p.tuples), sorted_keys(data));
    }
  }
}

TEST(RadixPartition, ChunkOrderPreserved) {
  // Payload = input position; within a partition, payloads from one chunk stay increasing.
  auto data = random_tuples(10'000, 4);
  for (uint32_t i = 0; i < data.size(); ++i) data[i].payload = i;
  const auto p = radix_partition(data, 4, 0, 1, KernelVariant::unrolled8);
  for (std::size_t q = 0; q < p.partition_count(); ++q) {
    const auto part = p.partition(q);
    EXPECT_TRUE(std::is_sorted(part.begin(), part.end(), [](const Tuple& a, const Tuple& b) {
      return a.payload < b.payload;
    }));
  }
}

TEST(CrackPartition, SmallExample) {
  Relation r = relation_of({3, 1, 2, 0});
  const auto split = crack_partition(r.view(), 0);
  EXPECT_EQ(split, 2u);
  EXPECT_EQ(r.tuples[0].key % 2, 0u);
  EXPECT_EQ(r.tuples[1].key % 2, 0u);
  EXPECT_EQ(r.tuples[2].key % 2, 1u);
}

TEST(CrackPartition, AllBitsClear) {
  Relation r = relation_of({4, 8, 2, 6});
  const Relation before = r;
  EXPECT_EQ(crack_partition(r.view(), 0), 4u);
  EXPECT_EQ(r, before);
}

TEST(CrackPartition, RandomSplitAndMultiset) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto data = random_tuples(1 + seed * 97, seed);
    const auto before = sorted_keys(data);
    const unsigned bit = static_cast<unsigned>(seed % 32);
    const auto split = crack_partition(data, bit);
    for (std::size_t i = 0; i < data.size(); ++i) ASSERT_EQ(((data[i].key >> bit) & 1u) != 0, i >= split);
    EXPECT_EQ(sorted_keys(data), before);
  }
}

TEST(CrackRecursive, MatchesRadixPartition) {
  SplitMix64 rng(12);
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = rng.below(5000);
    const unsigned bits = 1 + static_cast<unsigned>(rng.below(8));
    const unsigned shift = static_cast<unsigned>(rng.below(32 - bits + 1));
    auto data = random_tuples(n, rng.next());
    const auto ref = radix_partition(data, bits, shift, 1, KernelVariant::naive);
    const auto offsets = crack_recursive(data, bits, shift);
    ASSERT_EQ(offsets, ref.offsets);
    for (std::size_t q = 0; q + 1 < offsets.size(); ++q) {
      const std::span<const Tuple> part(data.data() + offsets[q], offsets[q + 1] - offsets[q]);
      ASSERT_EQ(sorted_keys(part), sorted_keys(ref.partition(q)));
    }
  }
}

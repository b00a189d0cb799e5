#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "olap/errors.hpp"
#include "olap/microbench.hpp"
#include "olap/timer.hpp"

using namespace olap;

TEST(Chain, LengthFourVisitsAll) {
  const ChainArray c = ChainArray::random_cycle(4, 1);
  std::set<uint64_t> seen;
  uint64_t at = 0;
  for (int i = 0; i < 4; ++i) {
    seen.insert(at);
    at = c.slots[at];
  }
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_EQ(at, 0u);
}

TEST(Chain, SingleCycleForManySeeds) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const ChainArray c = ChainArray::random_cycle(1 + seed * 37, seed);
    EXPECT_TRUE(c.is_single_cycle()) << seed;
  }
  ChainArray broken = ChainArray::random_cycle(10, 3);
  std::swap(broken.slots[0], broken.slots[broken.slots[0]]);
  EXPECT_FALSE(broken.is_single_cycle());
}

TEST(Chase, ZeroSteps) {
  const auto r = chase_chain(4096, 0, 1);
  EXPECT_EQ(r.op_count, 0u);
  EXPECT_EQ(r.elapsed_ns, 0u);
}

TEST(Chase, ReportsNsPerStep) {
  const auto r = chase_chain(1 << 16, 100000, 1);
  EXPECT_EQ(r.op_count, 100000u);
  EXPECT_EQ(r.unit, MicrobenchResult::Unit::ns_per_op);
  EXPECT_DOUBLE_EQ(r.metric, static_cast<double>(r.elapsed_ns) / 100000.0);
  EXPECT_LT(r.checksum, (1u << 16) / 8);
  EXPECT_THROW(chase_chain(32, 10, 1), ConfigError);
}

TEST(Chase, SmallArrayFasterThanLarge) {
  // Latency ordering: L1-resident chain vs. a chain far larger than any cache.
  const auto small = chase_chain(16 << 10, 2'000'000, 2);
  const auto large = chase_chain(256 << 20, 2'000'000, 2);
  EXPECT_LT(small.metric, large.metric);
}

TEST(RandomWrites, SingleSlot) {
  std::vector<uint64_t> a(1, 0);
  const uint64_t last = random_writes_into(a, 100, 5);
  EXPECT_EQ(a[0], last);
}

TEST(RandomWrites, FollowsLcg) {
  std::vector<uint64_t> a(1000, 0);
  random_writes_into(a, 3, 9);
  WriteLcg lcg{9};
  std::vector<uint64_t> expect(1000, 0);
  for (int i = 0; i < 3; ++i) {
    const uint64_t s = lcg.next();
    expect[(s >> WriteLcg::kSlotShift) & 511] = s;
  }
  EXPECT_EQ(a, expect);
}

TEST(RandomWrites, AddressMaskRestrictsSlots) {
  std::vector<uint64_t> a(1024, 0);
  random_writes_into(a, 10000, 4, 0xF);
  for (std::size_t i = 16; i < a.size(); ++i) EXPECT_EQ(a[i], 0u);
}

TEST(RandomWrites, Deterministic) {
  std::vector<uint64_t> a(4096, 0), b(4096, 0);
  random_writes_into(a, 50000, 77);
  random_writes_into(b, 50000, 77);
  EXPECT_EQ(a, b);
  const auto r = random_writes(4096 * 8, 50000, 77);
  EXPECT_EQ(r.op_count, 50000u);
  EXPECT_THROW(random_writes(12, 1, 1), ConfigError);
}

TEST(Linear, ReadChecksumIsSum) {
  std::vector<uint64_t> a(1024);
  uint64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] = i * 7 + 1;
  EXPECT_EQ(read_pass(a, AccessWidth::bits64), sum);
  if (host_supports(AccessWidth::bits512)) {
    EXPECT_EQ(read_pass(a, AccessWidth::bits512), sum);
  } else {
    EXPECT_THROW(read_pass(a, AccessWidth::bits512), UnsupportedError);
  }
}

TEST(Linear, WriteFillsPattern) {
  std::vector<uint64_t> a(1024, 0);
  write_pass(a, AccessWidth::bits64, 0xABCD);
  for (uint64_t v : a) ASSERT_EQ(v, 0xABCDu);
  if (host_supports(AccessWidth::bits512)) {
    write_pass(a, AccessWidth::bits512, 0x1234);
    for (uint64_t v : a) ASSERT_EQ(v, 0x1234u);
  }
}

TEST(Linear, MetricConsistency) {
  LinearOptions o;
  o.min_duration_ns = 20'000'000;
  const auto r = linear_read(1 << 20, AccessWidth::bits64, 2, o);
  EXPECT_GE(r.elapsed_ns, o.min_duration_ns);
  EXPECT_EQ(r.bytes_touched % (1 << 20), 0u);
  EXPECT_NEAR(r.metric * static_cast<double>(r.elapsed_ns), static_cast<double>(r.bytes_touched),
              1e-9 * static_cast<double>(r.bytes_touched));
  const uint64_t words = (1 << 20) / 8;
  EXPECT_EQ(r.checksum, words * (words - 1) / 2);
  o.fixed_passes = 3;
  EXPECT_EQ(linear_write(1 << 20, AccessWidth::bits64, 1, o).bytes_touched, 3u << 20);
}

TEST(Linear, CacheResidentFasterThanDram) {
  LinearOptions o;
  o.min_duration_ns = 50'000'000;
  const auto l1 = linear_read(16 << 10, AccessWidth::bits64, 1, o);
  const auto dram = linear_read(256 << 20, AccessWidth::bits64, 1, o);
  EXPECT_GT(l1.metric, dram.metric);
}

TEST(AccessWidth, Parse) {
  EXPECT_EQ(parse_access_width("64"), AccessWidth::bits64);
  EXPECT_EQ(parse_access_width("512"), AccessWidth::bits512);
  EXPECT_THROW(parse_access_width("256"), ConfigError);
}

TEST(Timer, MonotonicAndCalibrated) {
  Stopwatch w;
  const auto t0 = CycleClock::now();
  volatile uint64_t x = 0;
  for (int i = 0; i < 1000000; ++i) x = x + i;
  EXPECT_GE(CycleClock::now(), t0);
  EXPECT_GT(CycleClock::ns_per_tick(), 0.0);
  EXPECT_GT(w.elapsed_ns(), 0u);
  EXPECT_TRUE(CycleClock::source() == "tsc" || CycleClock::source() == "wall");
}

#include "olap/microbench.hpp"

#include <barrier>
#include <bit>
#include <string>

#include "olap/buffer.hpp"
#include "olap/errors.hpp"
#include "olap/random.hpp"
#include "olap/team.hpp"
#include "olap/timer.hpp"

namespace olap {

double MicrobenchResult::derive(Unit unit, uint64_t op_count, uint64_t elapsed_ns, uint64_t bytes_touched) {
  switch (unit) {
    case Unit::ns_per_op:
      return op_count == 0 ? 0.0 : static_cast<double>(elapsed_ns) / static_cast<double>(op_count);
    case Unit::gb_per_s:
      return elapsed_ns == 0 ? 0.0 : static_cast<double>(bytes_touched) / static_cast<double>(elapsed_ns);
    case Unit::ops_per_s:
      return elapsed_ns == 0 ? 0.0 : static_cast<double>(op_count) * 1e9 / static_cast<double>(elapsed_ns);
  }
  return 0.0;
}

std::string to_string(MicrobenchResult::Unit unit) {
  switch (unit) {
    case MicrobenchResult::Unit::ns_per_op:
      return "ns/op";
    case MicrobenchResult::Unit::gb_per_s:
      return "GB/s";
    case MicrobenchResult::Unit::ops_per_s:
      return "ops/s";
  }
  return "?";
}

ChainArray ChainArray::random_cycle(std::size_t length, uint64_t seed) {
  ChainArray chain;
  chain.slots.resize(length);
  if (length == 0) return chain;
  // Sattolo: a uniformly random permutation consisting of exactly one cycle.
  std::vector<uint64_t> order(length);
  for (std::size_t i = 0; i < length; ++i) order[i] = i;
  SplitMix64 rng(derive_seed(seed, 20));
  for (std::size_t i = length - 1; i > 0; --i) {
    const std::size_t j = rng.below(i);
    std::swap(order[i], order[j]);
  }
  for (std::size_t i = 0; i < length; ++i) chain.slots[order[i]] = order[(i + 1) % length];
  return chain;
}

bool ChainArray::is_single_cycle() const {
  const std::size_t n = slots.size();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  uint64_t idx = 0;
  for (std::size_t step = 0; step < n; ++step) {
    if (idx >= n || seen[idx]) return false;
    seen[idx] = true;
    idx = slots[idx];
  }
  return idx == 0;
}

MicrobenchResult chase_chain(std::size_t array_bytes, uint64_t steps, uint64_t seed) {
  if (array_bytes < 64) throw ConfigError("chase_chain needs at least 64 bytes");
  const ChainArray chain = ChainArray::random_cycle(array_bytes / sizeof(uint64_t), seed);
  const uint64_t* slots = chain.slots.data();

  // Untimed warm-up pass.
  uint64_t warm = 0;
  for (uint64_t v : chain.slots) warm += v;
  asm volatile("" : : "r"(warm));

  uint64_t idx = 0;
  Stopwatch watch;
  for (uint64_t s = 0; s < steps; ++s) idx = slots[idx];
  const uint64_t elapsed = steps == 0 ? 0 : watch.elapsed_ns();

  MicrobenchResult r;
  r.unit = MicrobenchResult::Unit::ns_per_op;
  r.op_count = steps;
  r.elapsed_ns = elapsed;
  r.bytes_touched = steps * sizeof(uint64_t);
  r.checksum = idx;
  r.finalize();
  return r;
}

uint64_t random_writes_into(std::span<uint64_t> array, uint64_t writes, uint64_t seed, uint64_t address_mask) {
  if (array.empty()) throw ConfigError("random_writes needs a non-empty array");
  const uint64_t slot_mask = (std::bit_floor(array.size()) - 1) & address_mask;
  uint64_t* data = array.data();
  WriteLcg lcg{seed};
  for (uint64_t w = 0; w < writes; ++w) {
    const uint64_t v = lcg.next();
    data[(v >> WriteLcg::kSlotShift) & slot_mask] = v;
  }
  return lcg.state;
}

MicrobenchResult random_writes(std::size_t array_bytes, uint64_t writes, uint64_t seed, uint64_t address_mask) {
  if (array_bytes == 0 || array_bytes % sizeof(uint64_t) != 0) {
    throw ConfigError("random_writes array size must be a positive multiple of 8 bytes");
  }
  AlignedBuffer<uint64_t> array(array_bytes / sizeof(uint64_t), AllocMode::prealloc_touch);

  Stopwatch watch;
  const uint64_t state = random_writes_into(array.span(), writes, seed, address_mask);
  const uint64_t elapsed = writes == 0 ? 0 : watch.elapsed_ns();

  uint64_t checksum = state;
  for (uint64_t v : array) checksum += v;

  MicrobenchResult r;
  r.unit = MicrobenchResult::Unit::ns_per_op;
  r.op_count = writes;
  r.elapsed_ns = elapsed;
  r.bytes_touched = writes * sizeof(uint64_t);
  r.checksum = checksum;
  r.finalize();
  return r;
}

AccessWidth parse_access_width(std::string_view name) {
  if (name == "64" || name == "bits64") return AccessWidth::bits64;
  if (name == "512" || name == "bits512") return AccessWidth::bits512;
  throw ConfigError("unknown access width: " + std::string(name));
}

std::string_view to_string(AccessWidth width) { return width == AccessWidth::bits64 ? "64" : "512"; }

bool host_supports(AccessWidth width) {
  if (width == AccessWidth::bits64) return true;
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx512f");
#else
  return false;
#endif
}

namespace {

void require_width(std::size_t words, AccessWidth width) {
  if (!host_supports(width)) throw UnsupportedError("host does not support " + std::string(to_string(width)) + "-bit accesses");
  if (width == AccessWidth::bits512 && words % 8 != 0) throw ConfigError("512-bit passes need a multiple of 64 bytes");
}

#if defined(__x86_64__)

uint64_t read64(const uint64_t* p, std::size_t words) {
  uint64_t a = 0, b = 0, c = 0, d = 0;
  const uint64_t* end4 = p + (words & ~std::size_t{3});
  if (p < end4) {
    asm volatile(
        "1:\n\t"
        "addq 0(%[p]), %[a]\n\t"
        "addq 8(%[p]), %[b]\n\t"
        "addq 16(%[p]), %[c]\n\t"
        "addq 24(%[p]), %[d]\n\t"
        "addq $32, %[p]\n\t"
        "cmpq %[end], %[p]\n\t"
        "jb 1b\n\t"
        : [p] "+r"(p), [a] "+r"(a), [b] "+r"(b), [c] "+r"(c), [d] "+r"(d)
        : [end] "r"(end4)
        : "cc", "memory");
  }
  for (std::size_t i = 0; i < (words & 3); ++i) a += static_cast<const volatile uint64_t*>(p)[i];
  return a + b + c + d;
}

uint64_t read512(const uint64_t* p, std::size_t words) {
  alignas(64) uint64_t lanes[8];
  const uint64_t* end = p + words;
  asm volatile(
      "vpxorq %%zmm0, %%zmm0, %%zmm0\n\t"
      "cmpq %[end], %[p]\n\t"
      "jae 2f\n\t"
      "1:\n\t"
      "vpaddq (%[p]), %%zmm0, %%zmm0\n\t"
      "addq $64, %[p]\n\t"
      "cmpq %[end], %[p]\n\t"
      "jb 1b\n\t"
      "2:\n\t"
      "vmovdqu64 %%zmm0, (%[out])\n\t"
      "vzeroupper\n\t"
      : [p] "+r"(p)
      : [end] "r"(end), [out] "r"(lanes)
      : "cc", "memory", "xmm0");
  uint64_t sum = 0;
  for (uint64_t v : lanes) sum += v;
  return sum;
}

void write64(uint64_t* p, std::size_t words, uint64_t value) {
  uint64_t* end4 = p + (words & ~std::size_t{3});
  if (p < end4) {
    asm volatile(
        "1:\n\t"
        "movq %[v], 0(%[p])\n\t"
        "movq %[v], 8(%[p])\n\t"
        "movq %[v], 16(%[p])\n\t"
        "movq %[v], 24(%[p])\n\t"
        "addq $32, %[p]\n\t"
        "cmpq %[end], %[p]\n\t"
        "jb 1b\n\t"
        : [p] "+r"(p)
        : [end] "r"(end4), [v] "r"(value)
        : "cc", "memory");
  }
  for (std::size_t i = 0; i < (words & 3); ++i) static_cast<volatile uint64_t*>(p)[i] = value;
}

void write512(uint64_t* p, std::size_t words, uint64_t value) {
  uint64_t* end = p + words;
  asm volatile(
      "vpbroadcastq %[v], %%zmm0\n\t"
      "cmpq %[end], %[p]\n\t"
      "jae 2f\n\t"
      "1:\n\t"
      "vmovdqu64 %%zmm0, (%[p])\n\t"
      "addq $64, %[p]\n\t"
      "cmpq %[end], %[p]\n\t"
      "jb 1b\n\t"
      "2:\n\t"
      "vzeroupper\n\t"
      : [p] "+r"(p)
      : [end] "r"(end), [v] "r"(value)
      : "cc", "memory", "xmm0");
}

#else

uint64_t read64(const uint64_t* p, std::size_t words) {
  uint64_t sum = 0;
  const volatile uint64_t* v = p;
  for (std::size_t i = 0; i < words; ++i) sum += v[i];
  return sum;
}
uint64_t read512(const uint64_t*, std::size_t) { throw UnsupportedError("512-bit accesses need x86-64"); }
void write64(uint64_t* p, std::size_t words, uint64_t value) {
  volatile uint64_t* v = p;
  for (std::size_t i = 0; i < words; ++i) v[i] = value;
}
void write512(uint64_t*, std::size_t, uint64_t) { throw UnsupportedError("512-bit accesses need x86-64"); }

#endif

MicrobenchResult linear_bench(bool write, std::size_t array_bytes, AccessWidth width, unsigned threads,
                              const LinearOptions& opts) {
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (array_bytes < width_bytes(width)) throw ConfigError("array smaller than one access");
  if (array_bytes % width_bytes(width) != 0) throw ConfigError("array size must be a multiple of the access width");
  const std::size_t words = array_bytes / sizeof(uint64_t);
  require_width(words, width);

  AlignedBuffer<uint64_t> array(words, AllocMode::prealloc_touch);
  for (std::size_t i = 0; i < words; ++i) array[i] = i;

  std::vector<uint64_t> sums(threads, 0);
  auto run_passes = [&](uint64_t passes) -> uint64_t {
    uint64_t t0 = 0, t1 = 0;
    int stage = 0;
    std::barrier sync(static_cast<std::ptrdiff_t>(threads), [&]() noexcept {
      (stage++ == 0 ? t0 : t1) = CycleClock::now();
    });
    run_team(threads, [&](unsigned tid) {
      const ChunkRange chunk = chunk_for(words, tid, threads, 8);
      uint64_t* p = array.data() + chunk.begin;
      const std::size_t n = chunk.end - chunk.begin;
      sync.arrive_and_wait();
      uint64_t sum = 0;
      for (uint64_t pass = 0; pass < passes && n != 0; ++pass) {
        if (write) {
          width == AccessWidth::bits64 ? write64(p, n, pass) : write512(p, n, pass);
        } else {
          sum = width == AccessWidth::bits64 ? read64(p, n) : read512(p, n);
        }
      }
      sums[tid] = sum;
      sync.arrive_and_wait();
    });
    return CycleClock::to_ns(t1 - t0);
  };

  run_passes(1);  // warm-up
  if (write) {
    for (std::size_t i = 0; i < words; ++i) array[i] = i;
  }

  uint64_t passes = opts.fixed_passes != 0 ? opts.fixed_passes : 1;
  uint64_t elapsed = 0;
  for (;;) {
    elapsed = run_passes(passes);
    if (opts.fixed_passes != 0 || elapsed >= opts.min_duration_ns) break;
    const double scale = elapsed == 0 ? 16.0 : 1.2 * static_cast<double>(opts.min_duration_ns) / static_cast<double>(elapsed);
    passes = std::max(passes * 2, static_cast<uint64_t>(static_cast<double>(passes) * std::min(scale, 1e6)));
  }

  MicrobenchResult r;
  r.unit = MicrobenchResult::Unit::gb_per_s;
  r.elapsed_ns = elapsed;
  r.bytes_touched = passes * array_bytes;
  r.op_count = r.bytes_touched / width_bytes(width);
  if (write) {
    r.checksum = words;
  } else {
    for (uint64_t s : sums) r.checksum += s;
  }
  r.finalize();
  return r;
}

}  // namespace

uint64_t read_pass(std::span<const uint64_t> words, AccessWidth width) {
  require_width(words.size(), width);
  return width == AccessWidth::bits64 ? read64(words.data(), words.size()) : read512(words.data(), words.size());
}

void write_pass(std::span<uint64_t> words, AccessWidth width, uint64_t value) {
  require_width(words.size(), width);
  width == AccessWidth::bits64 ? write64(words.data(), words.size(), value)
                               : write512(words.data(), words.size(), value);
}

MicrobenchResult linear_read(std::size_t array_bytes, AccessWidth width, unsigned threads, LinearOptions opts) {
  return linear_bench(false, array_bytes, width, threads, opts);
}

MicrobenchResult linear_write(std::size_t array_bytes, AccessWidth width, unsigned threads, LinearOptions opts) {
  return linear_bench(true, array_bytes, width, threads, opts);
}

}  // namespace olap

#include "olap/joins.hpp"

#include <atomic>
#include <barrier>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "kernels.hpp"
#include "olap/errors.hpp"
#include "olap/partition.hpp"
#include "olap/team.hpp"
#include "olap/timer.hpp"

namespace olap {

JoinAlgorithm parse_join_algorithm(std::string_view name) {
  if (name == "pht") return JoinAlgorithm::pht;
  if (name == "rho") return JoinAlgorithm::rho;
  if (name == "crk") return JoinAlgorithm::crk;
  throw ConfigError("unknown join algorithm: " + std::string(name));
}

std::string_view to_string(JoinAlgorithm algo) {
  switch (algo) {
    case JoinAlgorithm::pht:
      return "pht";
    case JoinAlgorithm::rho:
      return "rho";
    case JoinAlgorithm::crk:
      return "crk";
  }
  return "?";
}

std::pair<unsigned, unsigned> suggested_radix_bits(uint64_t build_cardinality) {
  const double ratio = static_cast<double>(build_cardinality) / 800.0;
  unsigned total = ratio <= 1.0 ? 0 : static_cast<unsigned>(std::ceil(std::log2(ratio)));
  total = std::min(total, kMaxRadixBits);
  // Never more partitions than build tuples.
  while (total > 0 && (uint64_t{1} << total) > build_cardinality) --total;
  const unsigned pass1 = (total + 1) / 2;
  return {pass1, total - pass1};
}

AlignedBuffer<JoinRow> allocate_join_output(uint64_t probe_cardinality, AllocMode mode) {
  return AlignedBuffer<JoinRow>(probe_cardinality, mode);
}

namespace {

constexpr uint32_t kLatchBit = 0x8000'0000u;

void validate(const JoinOptions& opts, JoinAlgorithm algo, uint64_t build_n) {
  if (opts.threads == 0) throw ConfigError("threads must be at least 1");
  if (build_n >= kLatchBit) throw ConfigError("build relation exceeds 2^31 - 1 tuples");
  if (algo == JoinAlgorithm::pht) return;
  const unsigned total = opts.total_radix_bits();
  if (total > kMaxRadixBits) {
    throw ConfigError("radix bits " + std::to_string(total) + " exceed the limit of " + std::to_string(kMaxRadixBits));
  }
  if (build_n > 0 && (uint64_t{1} << total) > build_n) {
    throw ConfigError("partition count 2^" + std::to_string(total) + " exceeds build cardinality " +
                      std::to_string(build_n));
  }
}

AlignedBuffer<JoinRow> prepare_output(const JoinOptions& opts, uint64_t probe_n, AlignedBuffer<JoinRow> given) {
  if (!opts.materialize) return {};
  if (given.size() >= probe_n) return given;
  return allocate_join_output(probe_n, AllocMode::prealloc_touch);
}

struct Segment {
  uint64_t start;
  uint64_t count;
};

/// Moves per-task output segments together so rows [0, total) are contiguous.
uint64_t compact(JoinRow* rows, const std::vector<Segment>& segments) {
  uint64_t dst = 0;
  for (const auto& seg : segments) {
    if (seg.count != 0 && seg.start != dst) std::memmove(rows + dst, rows + seg.start, seg.count * sizeof(JoinRow));
    dst += seg.count;
  }
  return dst;
}

JoinResult finish(const JoinOptions& opts, AlignedBuffer<JoinRow> out, uint64_t matches,
                  const std::vector<Segment>& segments, bool overflow) {
  if (overflow) throw ConfigError("join produced more matches than probe tuples; build keys are not unique");
  JoinResult result;
  result.match_count = matches;
  if (opts.materialize) {
    JoinOutput output;
    output.size = out.empty() ? 0 : compact(out.data(), segments);
    output.storage = std::move(out);
    result.output = std::move(output);
  }
  return result;
}

void record_phases(JoinResult& result, const std::vector<const char*>& names, const std::vector<uint64_t>& marks) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    result.phase_times[names[i]] = i + 1 < marks.size() ? CycleClock::to_ns(marks[i + 1] - marks[i]) : 0;
  }
}

/// Per-partition bucket-chained tables shared by RHO and CrkJoin. Partition i of the build side is
/// build[build_offsets[i], build_offsets[i+1]); its buckets are heads[head_offsets[i], head_offsets[i+1]).
struct InCacheTables {
  const Tuple* build = nullptr;
  const uint64_t* build_offsets = nullptr;
  const Tuple* probe = nullptr;
  const uint64_t* probe_offsets = nullptr;
  uint32_t* heads = nullptr;
  const uint64_t* head_offsets = nullptr;
  uint32_t* next = nullptr;
  unsigned hash_shift = 0;

  void build_partition(std::size_t i, KernelVariant variant) const {
    const uint64_t begin = build_offsets[i];
    const uint64_t n = build_offsets[i + 1] - begin;
    const uint64_t buckets = head_offsets[i + 1] - head_offsets[i];
    uint32_t* h = heads + head_offsets[i];
    std::memset(h, 0, buckets * sizeof(uint32_t));
    kernels::chain_build(build + begin, n, static_cast<uint32_t>(buckets - 1), hash_shift, h, next + begin, variant);
  }

  /// Probes partition i; writes at most `capacity` rows to `out` when non-null.
  uint64_t probe_partition(std::size_t i, JoinRow* out, uint64_t capacity, bool& overflow) const {
    const Tuple* r = build + build_offsets[i];
    const uint32_t* nx = next + build_offsets[i];
    const uint32_t* h = heads + head_offsets[i];
    const auto mask = static_cast<uint32_t>(head_offsets[i + 1] - head_offsets[i] - 1);
    uint64_t count = 0;
    for (uint64_t s = probe_offsets[i]; s < probe_offsets[i + 1]; ++s) {
      const Tuple t = probe[s];
      for (uint32_t j = h[(t.key >> hash_shift) & mask]; j != 0; j = nx[j - 1]) {
        if (r[j - 1].key == t.key) {
          if (out != nullptr) {
            if (count < capacity) {
              out[count] = {t.key, r[j - 1].payload, t.payload};
            } else {
              overflow = true;
            }
          }
          ++count;
        }
      }
    }
    return count;
  }
};

/// Bucket counts per partition (power of two, at least one), as prefix offsets.
void bucket_offsets(const std::vector<uint64_t>& build_offsets, std::vector<uint64_t>& head_offsets) {
  const std::size_t parts = build_offsets.size() - 1;
  head_offsets.assign(parts + 1, 0);
  for (std::size_t i = 0; i < parts; ++i) {
    const uint64_t n = build_offsets[i + 1] - build_offsets[i];
    head_offsets[i + 1] = head_offsets[i] + std::bit_ceil(std::max<uint64_t>(n, 1));
  }
}

void push_all(TaskQueue& queue, TaskKind kind, std::size_t count) {
  for (std::size_t p = 0; p < count; ++p) {
    Task task;
    task.kind = kind;
    task.partition = static_cast<uint32_t>(p);
    while (!queue.push(task)) cpu_relax();
  }
}

JoinResult empty_result(const JoinOptions& opts, AlignedBuffer<JoinRow> out, const std::vector<const char*>& phases) {
  JoinResult result = finish(opts, std::move(out), 0, {}, false);
  for (const char* name : phases) result.phase_times[name] = 0;
  return result;
}

const std::vector<const char*> kPhtPhases{"build", "probe"};
const std::vector<const char*> kRhoPhases{"hist1", "copy1", "hist2", "copy2", "build", "probe"};
const std::vector<const char*> kCrkPhases{"copy", "crack", "build", "probe"};

}  // namespace

JoinResult pht_join(const Relation& build, const Relation& probe, const JoinOptions& opts,
                    AlignedBuffer<JoinRow> output) {
  validate(opts, JoinAlgorithm::pht, build.cardinality());
  const uint64_t nr = build.cardinality();
  const uint64_t ns = probe.cardinality();
  AlignedBuffer<JoinRow> out = prepare_output(opts, ns, std::move(output));
  if (nr == 0 || ns == 0) return empty_result(opts, std::move(out), kPhtPhases);

  const unsigned threads = opts.threads;
  const uint64_t buckets = std::bit_ceil(nr);
  const auto bucket_mask = static_cast<uint32_t>(buckets - 1);
  AlignedBuffer<uint32_t> heads(buckets, AllocMode::lazy);  // fresh mapping, zero-filled
  AlignedBuffer<uint32_t> next(nr, AllocMode::lazy);

  std::vector<Segment> segments(threads);
  std::atomic<uint64_t> matches{0};
  std::atomic<bool> overflow{false};
  std::vector<uint64_t> marks;
  marks.reserve(4);
  std::barrier sync(static_cast<std::ptrdiff_t>(threads), [&]() noexcept { marks.push_back(CycleClock::now()); });

  const Tuple* r = build.tuples.data();
  const Tuple* s = probe.tuples.data();
  run_team(threads, [&](unsigned tid) {
    sync.arrive_and_wait();

    const ChunkRange rc = chunk_for(nr, tid, threads);
    uint32_t* head_words = heads.data();
    uint32_t* nx = next.data();
    kernels::for_each_digit(r + rc.begin, rc.end - rc.begin, bucket_mask, 0, opts.kernel_variant,
                            [&](std::size_t local, uint32_t b) {
                              const auto i = static_cast<uint32_t>(rc.begin + local);
                              std::atomic_ref<uint32_t> word(head_words[b]);
                              uint32_t old = word.fetch_or(kLatchBit, std::memory_order_acquire);
                              unsigned spins = 0;
                              while ((old & kLatchBit) != 0) {
                                while ((word.load(std::memory_order_relaxed) & kLatchBit) != 0) {
                                  if (++spins < 1024) {
                                    cpu_relax();
                                  } else {
                                    std::this_thread::yield();
                                    spins = 0;
                                  }
                                }
                                old = word.fetch_or(kLatchBit, std::memory_order_acquire);
                              }
                              nx[i] = old;
                              word.store(i + 1, std::memory_order_release);
                            });
    sync.arrive_and_wait();

    const ChunkRange sc = chunk_for(ns, tid, threads);
    JoinRow* dst = out.empty() ? nullptr : out.data() + sc.begin;
    const uint64_t capacity = sc.end - sc.begin;
    uint64_t count = 0;
    bool local_overflow = false;
    for (uint64_t k = sc.begin; k < sc.end; ++k) {
      const Tuple t = s[k];
      for (uint32_t j = head_words[t.key & bucket_mask]; j != 0; j = nx[j - 1]) {
        if (r[j - 1].key == t.key) {
          if (dst != nullptr) {
            if (count < capacity) {
              dst[count] = {t.key, r[j - 1].payload, t.payload};
            } else {
              local_overflow = true;
            }
          }
          ++count;
        }
      }
    }
    segments[tid] = {sc.begin, std::min(count, capacity)};
    matches.fetch_add(count, std::memory_order_relaxed);
    if (local_overflow) overflow.store(true, std::memory_order_relaxed);
    sync.arrive_and_wait();
  });

  JoinResult result = finish(opts, std::move(out), matches.load(), segments, overflow.load());
  record_phases(result, kPhtPhases, marks);
  return result;
}

JoinResult rho_join(const Relation& build, const Relation& probe, const JoinOptions& opts,
                    AlignedBuffer<JoinRow> output) {
  validate(opts, JoinAlgorithm::rho, build.cardinality());
  const uint64_t nr = build.cardinality();
  const uint64_t ns = probe.cardinality();
  AlignedBuffer<JoinRow> out = prepare_output(opts, ns, std::move(output));
  if (nr == 0 || ns == 0) return empty_result(opts, std::move(out), kRhoPhases);

  const unsigned threads = opts.threads;
  const unsigned b1 = opts.radix_bits_pass1;
  const unsigned b2 = opts.radix_bits_pass2;
  const std::size_t fan1 = std::size_t{1} << b1;
  const std::size_t fan2 = std::size_t{1} << b2;
  const std::size_t parts = fan1 * fan2;
  const uint32_t mask1 = radix_mask(b1, 0);
  const uint32_t mask2 = radix_mask(b2, b1);
  const KernelVariant variant = opts.kernel_variant;

  AlignedBuffer<Tuple> r1(nr, AllocMode::lazy), s1(ns, AllocMode::lazy);
  AlignedBuffer<Tuple> r2, s2;
  if (b2 > 0) {
    r2.allocate(nr, AllocMode::lazy);
    s2.allocate(ns, AllocMode::lazy);
  }

  std::vector<uint64_t> hist_r(threads * fan1, 0), hist_s(threads * fan1, 0);
  std::vector<uint64_t> cursor_r(threads * fan1), cursor_s(threads * fan1);
  std::vector<uint64_t> off1_r(fan1 + 1), off1_s(fan1 + 1);
  std::vector<uint64_t> hist2_r(parts, 0), hist2_s(parts, 0);
  std::vector<uint64_t> off_r(parts + 1), off_s(parts + 1);
  std::vector<uint64_t> head_off;
  AlignedBuffer<uint32_t> heads(2 * nr + parts, AllocMode::lazy);
  AlignedBuffer<uint32_t> next(nr, AllocMode::lazy);
  std::vector<Segment> segments(fan1, Segment{0, 0});
  std::atomic<uint64_t> matches{0};
  std::atomic<bool> overflow{false};

  auto queue = make_task_queue(opts.queue_kind, fan1);
  InCacheTables tables;
  tables.hash_shift = b1 + b2;
  tables.heads = heads.data();
  tables.next = next.data();

  std::vector<uint64_t> marks;
  marks.reserve(8);
  int stage = 0;
  auto completion = [&]() noexcept {
    marks.push_back(CycleClock::now());
    switch (stage++) {
      case 1: {  // after hist1: global offsets and per-thread scatter cursors
        uint64_t run_r = 0, run_s = 0;
        for (std::size_t p = 0; p < fan1; ++p) {
          off1_r[p] = run_r;
          off1_s[p] = run_s;
          for (unsigned t = 0; t < threads; ++t) {
            cursor_r[t * fan1 + p] = run_r;
            cursor_s[t * fan1 + p] = run_s;
            run_r += hist_r[t * fan1 + p];
            run_s += hist_s[t * fan1 + p];
          }
        }
        off1_r[fan1] = run_r;
        off1_s[fan1] = run_s;
        break;
      }
      case 2:  // after copy1
        if (b2 > 0) push_all(*queue, TaskKind::partition, fan1);
        break;
      case 3:  // after hist2
        if (b2 > 0) {
          uint64_t run_r = 0, run_s = 0;
          for (std::size_t i = 0; i < parts; ++i) {
            off_r[i] = run_r;
            off_s[i] = run_s;
            run_r += hist2_r[i];
            run_s += hist2_s[i];
          }
          off_r[parts] = run_r;
          off_s[parts] = run_s;
          push_all(*queue, TaskKind::partition, fan1);
        } else {
          off_r = off1_r;
          off_s = off1_s;
        }
        break;
      case 4: {  // after copy2
        bucket_offsets(off_r, head_off);
        tables.build = b2 > 0 ? r2.data() : r1.data();
        tables.probe = b2 > 0 ? s2.data() : s1.data();
        tables.build_offsets = off_r.data();
        tables.probe_offsets = off_s.data();
        tables.head_offsets = head_off.data();
        push_all(*queue, TaskKind::build_probe, fan1);
        break;
      }
      case 5:  // after build
        push_all(*queue, TaskKind::build_probe, fan1);
        break;
      default:
        break;
    }
  };
  std::barrier sync(static_cast<std::ptrdiff_t>(threads), completion);

  run_team(threads, [&](unsigned tid) {
    sync.arrive_and_wait();

    // hist1
    const ChunkRange rc = chunk_for(nr, tid, threads, 8);
    const ChunkRange sc = chunk_for(ns, tid, threads, 8);
    kernels::histogram(build.tuples.data() + rc.begin, rc.end - rc.begin, mask1, 0, &hist_r[tid * fan1], variant);
    kernels::histogram(probe.tuples.data() + sc.begin, sc.end - sc.begin, mask1, 0, &hist_s[tid * fan1], variant);
    sync.arrive_and_wait();

    // copy1
    kernels::scatter(build.tuples.data() + rc.begin, rc.end - rc.begin, mask1, 0, &cursor_r[tid * fan1], r1.data(),
                     variant);
    kernels::scatter(probe.tuples.data() + sc.begin, sc.end - sc.begin, mask1, 0, &cursor_s[tid * fan1], s1.data(),
                     variant);
    sync.arrive_and_wait();

    // hist2
    while (auto task = queue->pop()) {
      const std::size_t p = task->partition;
      kernels::histogram(r1.data() + off1_r[p], off1_r[p + 1] - off1_r[p], mask2, b1, &hist2_r[p * fan2], variant);
      kernels::histogram(s1.data() + off1_s[p], off1_s[p + 1] - off1_s[p], mask2, b1, &hist2_s[p * fan2], variant);
    }
    sync.arrive_and_wait();

    // copy2
    std::vector<uint64_t> cursor(fan2);
    while (auto task = queue->pop()) {
      const std::size_t p = task->partition;
      std::copy_n(&off_r[p * fan2], fan2, cursor.begin());
      kernels::scatter(r1.data() + off1_r[p], off1_r[p + 1] - off1_r[p], mask2, b1, cursor.data(), r2.data(), variant);
      std::copy_n(&off_s[p * fan2], fan2, cursor.begin());
      kernels::scatter(s1.data() + off1_s[p], off1_s[p + 1] - off1_s[p], mask2, b1, cursor.data(), s2.data(), variant);
    }
    sync.arrive_and_wait();

    // build
    while (auto task = queue->pop()) {
      const std::size_t p = task->partition;
      for (std::size_t q = 0; q < fan2; ++q) tables.build_partition(p * fan2 + q, variant);
    }
    sync.arrive_and_wait();

    // probe
    bool local_overflow = false;
    uint64_t local_matches = 0;
    while (auto task = queue->pop()) {
      const std::size_t p = task->partition;
      const uint64_t start = off_s[p * fan2];
      const uint64_t capacity = off_s[(p + 1) * fan2] - start;
      uint64_t count = 0;
      for (std::size_t q = 0; q < fan2; ++q) {
        JoinRow* dst = out.empty() ? nullptr : out.data() + start + std::min(count, capacity);
        count += tables.probe_partition(p * fan2 + q, dst, capacity - std::min(count, capacity), local_overflow);
      }
      segments[p] = {start, std::min(count, capacity)};
      local_matches += count;
    }
    matches.fetch_add(local_matches, std::memory_order_relaxed);
    if (local_overflow) overflow.store(true, std::memory_order_relaxed);
    sync.arrive_and_wait();
  });

  JoinResult result = finish(opts, std::move(out), matches.load(), segments, overflow.load());
  record_phases(result, kRhoPhases, marks);
  return result;
}

JoinResult crk_join(const Relation& build, const Relation& probe, const JoinOptions& opts,
                    AlignedBuffer<JoinRow> output) {
  validate(opts, JoinAlgorithm::crk, build.cardinality());
  const uint64_t nr = build.cardinality();
  const uint64_t ns = probe.cardinality();
  AlignedBuffer<JoinRow> out = prepare_output(opts, ns, std::move(output));
  if (nr == 0 || ns == 0) return empty_result(opts, std::move(out), kCrkPhases);

  const unsigned threads = opts.threads;
  const unsigned depth = opts.total_radix_bits();
  const std::size_t fan1 = std::size_t{1} << opts.radix_bits_pass1;
  const std::size_t fan2 = std::size_t{1} << opts.radix_bits_pass2;
  const std::size_t parts = std::size_t{1} << depth;
  // Levels cracked as separate queue tasks; deeper levels recurse inside one task.
  const unsigned task_levels = std::min(depth, static_cast<unsigned>(std::bit_width(threads - 1u)) + 3u);

  AlignedBuffer<Tuple> wr(nr, AllocMode::lazy), ws(ns, AllocMode::lazy);
  std::vector<uint64_t> off_r(parts + 1, 0), off_s(parts + 1, 0);
  std::vector<uint64_t> head_off;
  AlignedBuffer<uint32_t> heads(2 * nr + parts, AllocMode::lazy);
  AlignedBuffer<uint32_t> next(nr, AllocMode::lazy);
  std::vector<Segment> segments(fan1, Segment{0, 0});
  std::atomic<uint64_t> matches{0};
  std::atomic<bool> overflow{false};
  std::atomic<uint64_t> pending{0};

  auto queue = make_task_queue(opts.queue_kind, std::max<std::size_t>(fan1, std::size_t{4} << task_levels));
  InCacheTables tables;
  tables.hash_shift = depth;
  tables.heads = heads.data();
  tables.next = next.data();
  tables.build = wr.data();
  tables.probe = ws.data();
  tables.build_offsets = off_r.data();
  tables.probe_offsets = off_s.data();

  std::vector<uint64_t> marks;
  marks.reserve(6);
  int stage = 0;
  auto completion = [&]() noexcept {
    marks.push_back(CycleClock::now());
    switch (stage++) {
      case 1: {  // after copy
        pending.store(2, std::memory_order_relaxed);
        Task task;
        task.kind = TaskKind::crack;
        task.end = nr;
        queue->push(task);
        task.side = 1;
        task.end = ns;
        queue->push(task);
        break;
      }
      case 2:  // after crack
        off_r[parts] = nr;
        off_s[parts] = ns;
        bucket_offsets(off_r, head_off);
        tables.head_offsets = head_off.data();
        push_all(*queue, TaskKind::build_probe, fan1);
        break;
      case 3:  // after build
        push_all(*queue, TaskKind::build_probe, fan1);
        break;
      default:
        break;
    }
  };
  std::barrier sync(static_cast<std::ptrdiff_t>(threads), completion);

  auto push_child = [&](Task child) {
    while (!queue->push(child)) cpu_relax();
  };

  run_team(threads, [&](unsigned tid) {
    sync.arrive_and_wait();

    const ChunkRange rc = chunk_for(nr, tid, threads);
    const ChunkRange sc = chunk_for(ns, tid, threads);
    if (rc.end > rc.begin) std::memcpy(wr.data() + rc.begin, build.tuples.data() + rc.begin, (rc.end - rc.begin) * sizeof(Tuple));
    if (sc.end > sc.begin) std::memcpy(ws.data() + sc.begin, probe.tuples.data() + sc.begin, (sc.end - sc.begin) * sizeof(Tuple));
    sync.arrive_and_wait();

    unsigned idle = 0;
    while (pending.load(std::memory_order_acquire) != 0) {
      auto task = queue->pop();
      if (!task) {
        if (++idle < 256) {
          cpu_relax();
        } else {
          std::this_thread::yield();
          idle = 0;
        }
        continue;
      }
      idle = 0;
      Tuple* base = task->side == 0 ? wr.data() : ws.data();
      std::vector<uint64_t>& offsets = task->side == 0 ? off_r : off_s;
      std::span<Tuple> range(base + task->begin, task->end - task->begin);
      if (task->level < task_levels) {
        const std::size_t split = crack_partition(range, depth - 1 - task->level);
        Task left = *task;
        left.level = static_cast<uint16_t>(task->level + 1);
        left.partition = task->partition << 1;
        left.end = task->begin + split;
        Task right = left;
        right.partition |= 1;
        right.begin = left.end;
        right.end = task->end;
        pending.fetch_add(2, std::memory_order_relaxed);
        push_child(left);
        push_child(right);
      } else {
        crack_subtree(range, task->begin, depth - task->level, 0, task->partition, offsets);
      }
      pending.fetch_sub(1, std::memory_order_acq_rel);
    }
    sync.arrive_and_wait();

    while (auto task = queue->pop()) {
      const std::size_t p = task->partition;
      for (std::size_t q = 0; q < fan2; ++q) tables.build_partition(p * fan2 + q, opts.kernel_variant);
    }
    sync.arrive_and_wait();

    bool local_overflow = false;
    uint64_t local_matches = 0;
    while (auto task = queue->pop()) {
      const std::size_t p = task->partition;
      const uint64_t start = off_s[p * fan2];
      const uint64_t capacity = off_s[(p + 1) * fan2] - start;
      uint64_t count = 0;
      for (std::size_t q = 0; q < fan2; ++q) {
        JoinRow* dst = out.empty() ? nullptr : out.data() + start + std::min(count, capacity);
        count += tables.probe_partition(p * fan2 + q, dst, capacity - std::min(count, capacity), local_overflow);
      }
      segments[p] = {start, std::min(count, capacity)};
      local_matches += count;
    }
    matches.fetch_add(local_matches, std::memory_order_relaxed);
    if (local_overflow) overflow.store(true, std::memory_order_relaxed);
    sync.arrive_and_wait();
  });

  JoinResult result = finish(opts, std::move(out), matches.load(), segments, overflow.load());
  record_phases(result, kCrkPhases, marks);
  return result;
}

JoinResult run_join(JoinAlgorithm algo, const Relation& build, const Relation& probe, const JoinOptions& opts,
                    AlignedBuffer<JoinRow> output) {
  switch (algo) {
    case JoinAlgorithm::pht:
      return pht_join(build, probe, opts, std::move(output));
    case JoinAlgorithm::rho:
      return rho_join(build, probe, opts, std::move(output));
    case JoinAlgorithm::crk:
      return crk_join(build, probe, opts, std::move(output));
  }
  throw ConfigError("unknown join algorithm");
}

}  // namespace olap

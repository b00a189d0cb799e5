#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "olap/buffer.hpp"
#include "olap/histogram.hpp"
#include "olap/sync.hpp"
#include "olap/tuple.hpp"

namespace olap {

enum class JoinAlgorithm { pht, rho, crk };

JoinAlgorithm parse_join_algorithm(std::string_view name);
std::string_view to_string(JoinAlgorithm algo);

/// Upper bound on radix bits across both passes (and on CrkJoin's cracking depth).
inline constexpr unsigned kMaxRadixBits = 27;

struct JoinOptions {
  unsigned threads = 1;
  unsigned radix_bits_pass1 = 7;
  unsigned radix_bits_pass2 = 7;
  KernelVariant kernel_variant = KernelVariant::naive;
  QueueKind queue_kind = QueueKind::lockfree;
  bool materialize = false;

  unsigned total_radix_bits() const { return radix_bits_pass1 + radix_bits_pass2; }
};

/// Radix bits (pass 1, pass 2) that give roughly 800-tuple (6.4 KB) build partitions.
std::pair<unsigned, unsigned> suggested_radix_bits(uint64_t build_cardinality);

/// Materialized join output. Rows [0, size) are valid.
struct JoinOutput {
  AlignedBuffer<JoinRow> storage;
  uint64_t size = 0;

  std::span<const JoinRow> rows() const { return storage.span().first(size); }
};

/// Storage for materializing a join against a primary build side: one row per probe tuple at most.
AlignedBuffer<JoinRow> allocate_join_output(uint64_t probe_cardinality, AllocMode mode);

struct JoinResult {
  uint64_t match_count = 0;
  std::optional<JoinOutput> output;
  /// Wall time per phase in nanoseconds.
  ///  pht: build, probe
  ///  rho: hist1, copy1, hist2, copy2, build, probe
  ///  crk: copy, crack, build, probe
  std::map<std::string, uint64_t> phase_times;
};

// All joins require `build` to hold unique keys. With opts.materialize set, `output` is used as the
// materialization target when it holds at least probe.cardinality() rows; otherwise the join
// allocates (and touches) its own. Errors: ConfigError for an invalid radix-bit budget, or when
// a materializing join finds more matches than probe tuples (non-unique build keys).

/// Parallel hash join over one shared bucket-chained table. Each bucket head word carries a
/// latch bit taken while inserting.
JoinResult pht_join(const Relation& build, const Relation& probe, const JoinOptions& opts,
                    AlignedBuffer<JoinRow> output = {});

/// Two-pass parallel radix partitioning of both inputs, then one in-cache bucket-chained table per
/// partition pair. Pass-2, build and probe work is distributed as one task per pass-1 partition
/// through a TaskQueue of opts.queue_kind.
JoinResult rho_join(const Relation& build, const Relation& probe, const JoinOptions& opts,
                    AlignedBuffer<JoinRow> output = {});

/// Copies both inputs, cracks them one key bit at a time to total_radix_bits() depth, then runs the
/// same in-cache build and probe as rho_join.
JoinResult crk_join(const Relation& build, const Relation& probe, const JoinOptions& opts,
                    AlignedBuffer<JoinRow> output = {});

JoinResult run_join(JoinAlgorithm algo, const Relation& build, const Relation& probe, const JoinOptions& opts,
                    AlignedBuffer<JoinRow> output = {});

}  // namespace olap

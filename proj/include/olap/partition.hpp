#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "olap/histogram.hpp"
#include "olap/tuple.hpp"

namespace olap {

/// Tuples grouped by radix digit. Partition p is tuples[offsets[p], offsets[p+1]).
struct PartitionedRelation {
  std::vector<Tuple> tuples;
  std::vector<uint64_t> offsets;  // 2^radix_bits + 1 entries
  unsigned radix_bits = 0;
  unsigned shift = 0;

  std::size_t partition_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const Tuple> partition(std::size_t p) const {
    return std::span<const Tuple>(tuples).subspan(offsets[p], offsets[p + 1] - offsets[p]);
  }
};

/// Parallel two-phase radix partitioning: per-thread histograms, exclusive prefix sum of the
/// merged histogram, then a scatter pass. Tuples from one thread's input chunk keep their
/// relative order inside each partition.
PartitionedRelation radix_partition(std::span<const Tuple> data, unsigned radix_bits, unsigned shift, unsigned threads,
                                    KernelVariant variant);

/// In-place split on one key bit with two indexes sweeping inward and swapping misplaced tuples.
/// Afterwards tuples with the bit clear occupy [0, split) and the rest [split, n). Returns split.
std::size_t crack_partition(std::span<Tuple> data, unsigned bit_index);

/// Cracks recursively on bits [shift, shift + radix_bits), highest bit first, so the resulting
/// partitions appear in radix-digit order. Returns 2^radix_bits + 1 offsets.
std::vector<uint64_t> crack_recursive(std::span<Tuple> data, unsigned radix_bits, unsigned shift);

/// One subtree of crack_recursive: `data` is the range whose digit prefix (the already cracked
/// high bits) is `prefix` and which starts at absolute index `base`. Cracks the remaining
/// `bits_left` bits above `shift` and writes offsets[leaf digit] for each leaf.
void crack_subtree(std::span<Tuple> data, uint64_t base, unsigned bits_left, unsigned shift, std::size_t prefix,
                   std::span<uint64_t> offsets);

}  // namespace olap

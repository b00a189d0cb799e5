#include "olap/partition.hpp"

#include <utility>

#include "kernels.hpp"
#include "olap/errors.hpp"
#include "olap/team.hpp"

namespace olap {

PartitionedRelation radix_partition(std::span<const Tuple> data, unsigned radix_bits, unsigned shift, unsigned threads,
                                    KernelVariant variant) {
  if (radix_bits + shift > 32) throw ConfigError("radix_bits + shift must not exceed 32");
  if (radix_bits > 30) throw ConfigError("radix_bits too large");
  if (threads == 0) throw ConfigError("threads must be at least 1");

  const std::size_t fanout = std::size_t{1} << radix_bits;
  const uint32_t mask = radix_mask(radix_bits, shift);

  PartitionedRelation out;
  out.radix_bits = radix_bits;
  out.shift = shift;
  out.tuples.resize(data.size());
  out.offsets.assign(fanout + 1, 0);

  std::vector<std::vector<uint64_t>> hists(threads, std::vector<uint64_t>(fanout, 0));
  std::vector<ChunkRange> chunks(threads);
  for (unsigned t = 0; t < threads; ++t) chunks[t] = chunk_for(data.size(), t, threads, 8);

  run_team(threads, [&](unsigned t) {
    kernels::histogram(data.data() + chunks[t].begin, chunks[t].end - chunks[t].begin, mask, shift, hists[t].data(),
                       variant);
  });

  // Exclusive prefix sum over (partition, thread): partition-major, thread-minor.
  std::vector<std::vector<uint64_t>> cursors(threads, std::vector<uint64_t>(fanout));
  uint64_t running = 0;
  for (std::size_t p = 0; p < fanout; ++p) {
    out.offsets[p] = running;
    for (unsigned t = 0; t < threads; ++t) {
      cursors[t][p] = running;
      running += hists[t][p];
    }
  }
  out.offsets[fanout] = running;

  run_team(threads, [&](unsigned t) {
    kernels::scatter(data.data() + chunks[t].begin, chunks[t].end - chunks[t].begin, mask, shift, cursors[t].data(),
                     out.tuples.data(), variant);
  });
  return out;
}

std::size_t crack_partition(std::span<Tuple> data, unsigned bit_index) {
  if (bit_index >= 32) throw ConfigError("bit_index must be below 32");
  const uint32_t bit = uint32_t{1} << bit_index;
  std::size_t lo = 0;
  std::size_t hi = data.size();
  for (;;) {
    while (lo < hi && (data[lo].key & bit) == 0) ++lo;
    while (lo < hi && (data[hi - 1].key & bit) != 0) --hi;
    if (lo >= hi) break;
    std::swap(data[lo], data[hi - 1]);
    ++lo;
    --hi;
  }
  return lo;
}

void crack_subtree(std::span<Tuple> data, uint64_t base, unsigned bits_left, unsigned shift, std::size_t prefix,
                   std::span<uint64_t> offsets) {
  if (bits_left == 0) {
    offsets[prefix] = base;
    return;
  }
  const unsigned bit = shift + bits_left - 1;
  const std::size_t split = crack_partition(data, bit);
  crack_subtree(data.first(split), base, bits_left - 1, shift, prefix << 1, offsets);
  crack_subtree(data.subspan(split), base + split, bits_left - 1, shift, (prefix << 1) | 1, offsets);
}

std::vector<uint64_t> crack_recursive(std::span<Tuple> data, unsigned radix_bits, unsigned shift) {
  if (radix_bits + shift > 32) throw ConfigError("radix_bits + shift must not exceed 32");
  std::vector<uint64_t> offsets((std::size_t{1} << radix_bits) + 1, 0);
  crack_subtree(data, 0, radix_bits, shift, 0, offsets);
  offsets.back() = data.size();
  return offsets;
}

}  // namespace olap

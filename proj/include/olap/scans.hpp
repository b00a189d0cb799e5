#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "olap/buffer.hpp"
#include "olap/datagen.hpp"

namespace olap {

/// Inclusive byte range [lower, upper].
struct ScanPredicate {
  uint8_t lower = 0;
  uint8_t upper = 255;

  bool matches(uint8_t v) const { return lower <= v && v <= upper; }
  /// Predicate [0, ceil(256 * selectivity) - 1]; on uniform bytes it selects about `selectivity` of rows.
  static ScanPredicate for_selectivity(double selectivity);
};

/// One bit per row, LSB of word 0 is row 0. Bits past length_bits are zero.
struct BitVector {
  AlignedBuffer<uint64_t> words;
  uint64_t length_bits = 0;

  BitVector() = default;
  explicit BitVector(uint64_t length, AllocMode mode = AllocMode::prealloc_touch)
      : words((length + 63) / 64, mode), length_bits(length) {}

  bool test(uint64_t i) const { return ((words[i / 64] >> (i % 64)) & 1u) != 0; }
  uint64_t popcount() const;
};

/// Row indexes of matching rows, stored per thread chunk: chunk c's matches are
/// slots[segments[c].begin, segments[c].begin + segments[c].count), increasing within each chunk.
struct IndexVector {
  struct Segment {
    uint64_t begin = 0;
    uint64_t count = 0;
  };

  AlignedBuffer<uint64_t> slots;  // worst case: one slot per row
  std::vector<Segment> segments;

  IndexVector() = default;
  explicit IndexVector(uint64_t column_length, AllocMode mode = AllocMode::prealloc_touch)
      : slots(column_length, mode) {}

  uint64_t count() const;
  /// All indexes in chunk order (ascending overall).
  std::vector<uint64_t> flatten() const;
};

/// Rows per thread chunk are multiples of 64, so no two threads share a bit-vector word and
/// every chunk starts on a cache line of the column.
void scan_bitvector(const Column8& column, ScanPredicate pred, unsigned threads, BitVector& out);
BitVector scan_bitvector(const Column8& column, ScanPredicate pred, unsigned threads);

/// Writes 8 bytes per match. `out` must hold at least column.length() slots.
void scan_indexes(const Column8& column, ScanPredicate pred, unsigned threads, IndexVector& out);
IndexVector scan_indexes(const Column8& column, ScanPredicate pred, unsigned threads);

/// Scalar reference loops for cross-checking.
BitVector scan_bitvector_scalar(std::span<const uint8_t> column, ScanPredicate pred);
std::vector<uint64_t> scan_indexes_scalar(std::span<const uint8_t> column, ScanPredicate pred);

}  // namespace olap

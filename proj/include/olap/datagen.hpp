#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>

#include "olap/buffer.hpp"
#include "olap/tuple.hpp"

namespace olap {

/// Byte column for the predicate scans. Storage is page-aligned so per-thread chunks
/// that start on multiples of 64 rows are cache-line aligned.
struct Column8 {
  AlignedBuffer<uint8_t> values;

  Column8() = default;
  explicit Column8(std::size_t length) : values(length) {}

  uint64_t length() const { return values.size(); }
  std::span<const uint8_t> view() const { return values.span(); }
  std::span<uint8_t> view() { return values.span(); }
};

struct FkPair {
  Relation build;
  Relation probe;
};

/// Foreign-key join input. Build keys are a shuffled permutation of 1..build_cardinality;
/// probe keys are drawn uniformly from the build keys. Payload equals key on both sides.
/// Throws ConfigError when build_cardinality is zero.
FkPair generate_fk_pair(uint64_t build_cardinality, uint64_t probe_cardinality, uint64_t seed);

/// Uniform i.i.d. bytes.
Column8 generate_column(uint64_t length, uint64_t seed);

/// Builds a column from explicit bytes (tests, examples).
Column8 make_column(std::span<const uint8_t> bytes);

/// Binary relation file: "OLAPREL1", little-endian u64 cardinality, packed tuples.
inline constexpr char kRelationMagic[8] = {'O', 'L', 'A', 'P', 'R', 'E', 'L', '1'};
inline constexpr std::size_t kRelationHeaderBytes = 16;

void write_relation(const std::filesystem::path& path, const Relation& rel);
/// Throws FormatError on bad magic or truncation, std::runtime_error on I/O failure.
Relation read_relation(const std::filesystem::path& path);

}  // namespace olap

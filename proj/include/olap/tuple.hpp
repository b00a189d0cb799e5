#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace olap {

/// One join row: 32-bit key, 32-bit payload, packed into 8 bytes.
struct Tuple {
  uint32_t key;
  uint32_t payload;

  friend bool operator==(const Tuple&, const Tuple&) = default;
  friend auto operator<=>(const Tuple&, const Tuple&) = default;
};
static_assert(sizeof(Tuple) == 8);

/// A materialized join match: (key, build payload, probe payload), 12 bytes.
struct JoinRow {
  uint32_t key;
  uint32_t left_payload;
  uint32_t right_payload;

  friend bool operator==(const JoinRow&, const JoinRow&) = default;
  friend auto operator<=>(const JoinRow&, const JoinRow&) = default;
};
static_assert(sizeof(JoinRow) == 12);

/// Contiguous array of tuples; the universal join input.
struct Relation {
  std::vector<Tuple> tuples;

  Relation() = default;
  explicit Relation(std::vector<Tuple> t) : tuples(std::move(t)) {}

  uint64_t cardinality() const { return tuples.size(); }
  std::span<const Tuple> view() const { return tuples; }
  std::span<Tuple> view() { return tuples; }

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Number of 8-byte tuples in `megabytes` MiB.
constexpr uint64_t tuples_for_megabytes(double megabytes) {
  return static_cast<uint64_t>(megabytes * 1024.0 * 1024.0 / sizeof(Tuple));
}

}  // namespace olap

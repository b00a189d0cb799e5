#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "olap/bench_result.hpp"

namespace olap {

/// Random cyclic permutation: following slots[i] from any slot visits every slot once before returning.
struct ChainArray {
  std::vector<uint64_t> slots;

  /// Sattolo's algorithm over `length` slots.
  static ChainArray random_cycle(std::size_t length, uint64_t seed);
  std::size_t length() const { return slots.size(); }
  bool is_single_cycle() const;
};

/// Dependent random reads: each step loads the next index from the current slot.
/// Result: ns_per_op, checksum = final index. Requires array_bytes >= 64.
MicrobenchResult chase_chain(std::size_t array_bytes, uint64_t steps, uint64_t seed);

/// LCG used to pick random write slots: Knuth's MMIX constants.
struct WriteLcg {
  static constexpr uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr uint64_t kIncrement = 1442695040888963407ULL;
  /// Slot bits are taken from the high half of the state; low LCG bits have short periods.
  static constexpr unsigned kSlotShift = 16;

  uint64_t state;
  uint64_t next() { return state = state * kMultiplier + kIncrement; }
};

/// Performs `writes` 8-byte stores of the LCG state to slot (state >> 16) & slot_mask, where
/// slot_mask = (largest power of two <= slots) - 1, further restricted by `address_mask`.
/// Returns the final LCG state.
uint64_t random_writes_into(std::span<uint64_t> array, uint64_t writes, uint64_t seed, uint64_t address_mask = ~0ULL);

/// Timed random_writes_into over a fresh array of array_bytes (multiple of 8). Result: ns_per_op.
MicrobenchResult random_writes(std::size_t array_bytes, uint64_t writes, uint64_t seed,
                               uint64_t address_mask = ~0ULL);

enum class AccessWidth { bits64, bits512 };

AccessWidth parse_access_width(std::string_view name);
std::string_view to_string(AccessWidth width);
constexpr std::size_t width_bytes(AccessWidth w) { return w == AccessWidth::bits64 ? 8 : 64; }

/// Whether the host can execute the loads/stores for `width`.
bool host_supports(AccessWidth width);

// Hand-written (inline assembly on x86-64) sequential loops the compiler cannot drop or rewrite.
// `words` must be a multiple of 8 for bits512. Throw UnsupportedError when the host lacks the width.

/// Sum of all 64-bit words (mod 2^64), read with loads of `width`.
uint64_t read_pass(std::span<const uint64_t> words, AccessWidth width);
/// Stores `value` into every word with stores of `width`.
void write_pass(std::span<uint64_t> words, AccessWidth width, uint64_t value);

struct LinearOptions {
  /// Timed passes repeat until at least this much time has elapsed.
  uint64_t min_duration_ns = 200'000'000;
  /// When nonzero, run exactly this many passes and ignore min_duration_ns.
  uint64_t fixed_passes = 0;
};

/// Sequential bandwidth over array_bytes split into per-thread chunks (multiples of 64 bytes).
/// Result: gb_per_s. For reads, checksum is the sum of the array's words.
MicrobenchResult linear_read(std::size_t array_bytes, AccessWidth width, unsigned threads, LinearOptions opts = {});
/// For writes, checksum is the number of words written per pass.
MicrobenchResult linear_write(std::size_t array_bytes, AccessWidth width, unsigned threads, LinearOptions opts = {});

}  // namespace olap

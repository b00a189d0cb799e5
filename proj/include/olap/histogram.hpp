#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "olap/tuple.hpp"

namespace olap {

/// Loop shape used by the histogram, scatter and hash-build kernels.
///  naive:     one index computation then one memory update per tuple.
///  unrolled8: eight index computations, then the eight dependent updates.
///  simd32:    thirty-two indexes computed in vector registers, then the updates.
/// All variants produce identical results; a scalar loop handles the tail.
enum class KernelVariant { naive, unrolled8, simd32 };

KernelVariant parse_kernel_variant(std::string_view name);
std::string_view to_string(KernelVariant variant);

/// Radix digit of a key: (key & mask) >> shift.
constexpr uint32_t radix_mask(unsigned radix_bits, unsigned shift) {
  return static_cast<uint32_t>(((uint64_t{1} << radix_bits) - 1) << shift);
}

struct Histogram {
  std::vector<uint64_t> bins;
  unsigned radix_bits = 0;
  uint32_t mask = 0;
  unsigned shift = 0;

  uint64_t total() const;
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

/// Counts tuples per radix digit. Requires radix_bits + shift <= 32 (ConfigError otherwise).
Histogram compute_histogram(std::span<const Tuple> data, unsigned radix_bits, unsigned shift, KernelVariant variant);

/// Name of the vector instruction set behind simd32 in this build ("avx512", "avx2" or "scalar").
std::string_view simd_isa();

}  // namespace olap

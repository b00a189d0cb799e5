#include "olap/histogram.hpp"

#include <numeric>
#include <string>

#include "kernels.hpp"
#include "olap/errors.hpp"

namespace olap {

KernelVariant parse_kernel_variant(std::string_view name) {
  if (name == "naive") return KernelVariant::naive;
  if (name == "unrolled8") return KernelVariant::unrolled8;
  if (name == "simd32") return KernelVariant::simd32;
  throw ConfigError("unknown kernel variant: " + std::string(name));
}

std::string_view to_string(KernelVariant variant) {
  switch (variant) {
    case KernelVariant::naive:
      return "naive";
    case KernelVariant::unrolled8:
      return "unrolled8";
    case KernelVariant::simd32:
      return "simd32";
  }
  return "?";
}

std::string_view simd_isa() {
#if defined(__AVX512F__)
  return "avx512";
#elif defined(__AVX2__)
  return "avx2";
#else
  return "scalar";
#endif
}

uint64_t Histogram::total() const { return std::accumulate(bins.begin(), bins.end(), uint64_t{0}); }

Histogram compute_histogram(std::span<const Tuple> data, unsigned radix_bits, unsigned shift, KernelVariant variant) {
  if (radix_bits + shift > 32) throw ConfigError("radix_bits + shift must not exceed 32");
  if (radix_bits > 30) throw ConfigError("radix_bits too large for an in-memory histogram");
  Histogram h;
  h.radix_bits = radix_bits;
  h.shift = shift;
  h.mask = radix_mask(radix_bits, shift);
  h.bins.assign(std::size_t{1} << radix_bits, 0);
  kernels::histogram(data.data(), data.size(), h.mask, shift, h.bins.data(), variant);
  return h;
}

}  // namespace olap

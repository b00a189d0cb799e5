#pragma once

// Inner loops shared by radix partitioning and the hash joins. Each comes in the three
// KernelVariant shapes; every shape must leave memory in the same state as the naive loop.

#include <cstdint>
#include <cstring>

#include "olap/histogram.hpp"
#include "olap/tuple.hpp"

#if defined(__AVX512F__) || defined(__AVX2__)
#include <immintrin.h>
#endif

namespace olap::kernels {

inline uint32_t digit(uint32_t key, uint32_t mask, unsigned shift) { return (key & mask) >> shift; }

/// Computes digits of 32 consecutive tuples. Tuples are read as 64-bit lanes; masking with a
/// zero-extended 32-bit mask discards the payload half.
inline void digits32(const Tuple* in, uint32_t mask, unsigned shift, uint32_t* out) {
#if defined(__AVX512F__)
  const __m512i m = _mm512_set1_epi64(mask);
  const __m128i s = _mm_cvtsi32_si128(static_cast<int>(shift));
  const auto* p = reinterpret_cast<const __m512i*>(in);
  __m512i v0 = _mm512_srl_epi64(_mm512_and_si512(_mm512_loadu_si512(p + 0), m), s);
  __m512i v1 = _mm512_srl_epi64(_mm512_and_si512(_mm512_loadu_si512(p + 1), m), s);
  __m512i v2 = _mm512_srl_epi64(_mm512_and_si512(_mm512_loadu_si512(p + 2), m), s);
  __m512i v3 = _mm512_srl_epi64(_mm512_and_si512(_mm512_loadu_si512(p + 3), m), s);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 0), _mm512_cvtepi64_epi32(v0));
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 8), _mm512_cvtepi64_epi32(v1));
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 16), _mm512_cvtepi64_epi32(v2));
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 24), _mm512_cvtepi64_epi32(v3));
#elif defined(__AVX2__)
  const __m256i m = _mm256_set1_epi64x(mask);
  const __m128i s = _mm_cvtsi32_si128(static_cast<int>(shift));
  const __m256i pack = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);
  const auto* p = reinterpret_cast<const __m256i*>(in);
  for (int r = 0; r < 8; r += 2) {
    __m256i a = _mm256_srl_epi64(_mm256_and_si256(_mm256_loadu_si256(p + r), m), s);
    __m256i b = _mm256_srl_epi64(_mm256_and_si256(_mm256_loadu_si256(p + r + 1), m), s);
    a = _mm256_permutevar8x32_epi32(a, pack);
    b = _mm256_permutevar8x32_epi32(b, pack);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + r * 4), _mm256_permute2x128_si256(a, b, 0x20));
  }
#else
  for (int i = 0; i < 32; ++i) out[i] = digit(in[i].key, mask, shift);
#endif
}

inline void histogram(const Tuple* data, std::size_t n, uint32_t mask, unsigned shift, uint64_t* hist,
                      KernelVariant variant) {
  std::size_t i = 0;
  switch (variant) {
    case KernelVariant::naive:
      break;
    case KernelVariant::unrolled8:
      for (; i + 8 <= n; i += 8) {
        const uint32_t idx0 = digit(data[i + 0].key, mask, shift);
        const uint32_t idx1 = digit(data[i + 1].key, mask, shift);
        const uint32_t idx2 = digit(data[i + 2].key, mask, shift);
        const uint32_t idx3 = digit(data[i + 3].key, mask, shift);
        const uint32_t idx4 = digit(data[i + 4].key, mask, shift);
        const uint32_t idx5 = digit(data[i + 5].key, mask, shift);
        const uint32_t idx6 = digit(data[i + 6].key, mask, shift);
        const uint32_t idx7 = digit(data[i + 7].key, mask, shift);
        ++hist[idx0];
        ++hist[idx1];
        ++hist[idx2];
        ++hist[idx3];
        ++hist[idx4];
        ++hist[idx5];
        ++hist[idx6];
        ++hist[idx7];
      }
      break;
    case KernelVariant::simd32: {
      alignas(64) uint32_t idx[32];
      for (; i + 32 <= n; i += 32) {
        digits32(data + i, mask, shift, idx);
        for (int k = 0; k < 32; ++k) ++hist[idx[k]];
      }
      break;
    }
  }
  for (; i < n; ++i) ++hist[digit(data[i].key, mask, shift)];
}

/// Writes each tuple to out[cursor[digit]++].
inline void scatter(const Tuple* data, std::size_t n, uint32_t mask, unsigned shift, uint64_t* cursor, Tuple* out,
                    KernelVariant variant) {
  std::size_t i = 0;
  switch (variant) {
    case KernelVariant::naive:
      break;
    case KernelVariant::unrolled8:
      for (; i + 8 <= n; i += 8) {
        const uint32_t idx0 = digit(data[i + 0].key, mask, shift);
        const uint32_t idx1 = digit(data[i + 1].key, mask, shift);
        const uint32_t idx2 = digit(data[i + 2].key, mask, shift);
        const uint32_t idx3 = digit(data[i + 3].key, mask, shift);
        const uint32_t idx4 = digit(data[i + 4].key, mask, shift);
        const uint32_t idx5 = digit(data[i + 5].key, mask, shift);
        const uint32_t idx6 = digit(data[i + 6].key, mask, shift);
        const uint32_t idx7 = digit(data[i + 7].key, mask, shift);
        out[cursor[idx0]++] = data[i + 0];
        out[cursor[idx1]++] = data[i + 1];
        out[cursor[idx2]++] = data[i + 2];
        out[cursor[idx3]++] = data[i + 3];
        out[cursor[idx4]++] = data[i + 4];
        out[cursor[idx5]++] = data[i + 5];
        out[cursor[idx6]++] = data[i + 6];
        out[cursor[idx7]++] = data[i + 7];
      }
      break;
    case KernelVariant::simd32: {
      alignas(64) uint32_t idx[32];
      for (; i + 32 <= n; i += 32) {
        digits32(data + i, mask, shift, idx);
        for (int k = 0; k < 32; ++k) out[cursor[idx[k]]++] = data[i + k];
      }
      break;
    }
  }
  for (; i < n; ++i) out[cursor[digit(data[i].key, mask, shift)]++] = data[i];
}

/// Bucket-chained table over data[0, n): heads[b] and next[i] hold local index + 1, 0 ends a chain.
/// Bucket of a key = (key >> shift) & bucket_mask.
inline void chain_build(const Tuple* data, std::size_t n, uint32_t bucket_mask, unsigned shift, uint32_t* heads,
                        uint32_t* next, KernelVariant variant) {
  const uint32_t mask = shift >= 32 ? 0 : (bucket_mask << shift);
  const unsigned s = shift >= 32 ? 0 : shift;
  auto insert = [&](std::size_t i, uint32_t b) {
    next[i] = heads[b];
    heads[b] = static_cast<uint32_t>(i + 1);
  };
  std::size_t i = 0;
  switch (variant) {
    case KernelVariant::naive:
      break;
    case KernelVariant::unrolled8:
      for (; i + 8 <= n; i += 8) {
        const uint32_t b0 = digit(data[i + 0].key, mask, s);
        const uint32_t b1 = digit(data[i + 1].key, mask, s);
        const uint32_t b2 = digit(data[i + 2].key, mask, s);
        const uint32_t b3 = digit(data[i + 3].key, mask, s);
        const uint32_t b4 = digit(data[i + 4].key, mask, s);
        const uint32_t b5 = digit(data[i + 5].key, mask, s);
        const uint32_t b6 = digit(data[i + 6].key, mask, s);
        const uint32_t b7 = digit(data[i + 7].key, mask, s);
        insert(i + 0, b0);
        insert(i + 1, b1);
        insert(i + 2, b2);
        insert(i + 3, b3);
        insert(i + 4, b4);
        insert(i + 5, b5);
        insert(i + 6, b6);
        insert(i + 7, b7);
      }
      break;
    case KernelVariant::simd32: {
      alignas(64) uint32_t idx[32];
      for (; i + 32 <= n; i += 32) {
        digits32(data + i, mask, s, idx);
        for (int k = 0; k < 32; ++k) insert(i + k, idx[k]);
      }
      break;
    }
  }
  for (; i < n; ++i) insert(i, digit(data[i].key, mask, s));
}

}  // namespace olap::kernels

namespace olap::kernels {

/// Calls f(i, digit(data[i])) for i in [0, n) with the loop shape of `variant`:
/// batches of 8 or 32 digits are computed before any call of the batch is made.
template <typename F>
inline void for_each_digit(const Tuple* data, std::size_t n, uint32_t mask, unsigned shift, KernelVariant variant,
                           F&& f) {
  std::size_t i = 0;
  switch (variant) {
    case KernelVariant::naive:
      break;
    case KernelVariant::unrolled8:
      for (; i + 8 <= n; i += 8) {
        uint32_t idx[8];
        for (int k = 0; k < 8; ++k) idx[k] = digit(data[i + k].key, mask, shift);
        for (int k = 0; k < 8; ++k) f(i + k, idx[k]);
      }
      break;
    case KernelVariant::simd32: {
      alignas(64) uint32_t idx[32];
      for (; i + 32 <= n; i += 32) {
        digits32(data + i, mask, shift, idx);
        for (int k = 0; k < 32; ++k) f(i + k, idx[k]);
      }
      break;
    }
  }
  for (; i < n; ++i) f(i, digit(data[i].key, mask, shift));
}

}  // namespace olap::kernels

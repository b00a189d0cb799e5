#include "olap/scans.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "olap/errors.hpp"
#include "olap/team.hpp"

#if defined(__AVX512BW__) || defined(__AVX2__)
#include <immintrin.h>
#endif

namespace olap {

ScanPredicate ScanPredicate::for_selectivity(double selectivity) {
  if (!(selectivity > 0.0) || selectivity > 1.0) throw ConfigError("selectivity must be in (0, 1]");
  const auto upper = static_cast<int>(std::ceil(256.0 * selectivity)) - 1;
  return {0, static_cast<uint8_t>(std::clamp(upper, 0, 255))};
}

uint64_t BitVector::popcount() const {
  uint64_t total = 0;
  for (uint64_t w : words) total += static_cast<uint64_t>(std::popcount(w));
  return total;
}

uint64_t IndexVector::count() const {
  uint64_t total = 0;
  for (const auto& s : segments) total += s.count;
  return total;
}

std::vector<uint64_t> IndexVector::flatten() const {
  std::vector<uint64_t> out;
  out.reserve(count());
  for (const auto& s : segments) out.insert(out.end(), slots.data() + s.begin, slots.data() + s.begin + s.count);
  return out;
}

namespace {

/// Match mask of 64 consecutive bytes.
inline uint64_t match_word(const uint8_t* p, uint8_t lower, uint8_t upper) {
#if defined(__AVX512BW__)
  const __m512i v = _mm512_loadu_si512(p);
  const __mmask64 ge = _mm512_cmpge_epu8_mask(v, _mm512_set1_epi8(static_cast<char>(lower)));
  return _mm512_mask_cmple_epu8_mask(ge, v, _mm512_set1_epi8(static_cast<char>(upper)));
#elif defined(__AVX2__)
  const __m256i lo = _mm256_set1_epi8(static_cast<char>(lower));
  const __m256i hi = _mm256_set1_epi8(static_cast<char>(upper));
  uint64_t word = 0;
  for (int half = 0; half < 2; ++half) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + 32 * half));
    // Unsigned range test: v >= lo <=> max(v, lo) == v; v <= hi <=> min(v, hi) == v.
    const __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(v, lo), v);
    const __m256i le = _mm256_cmpeq_epi8(_mm256_min_epu8(v, hi), v);
    const auto bits = static_cast<uint32_t>(_mm256_movemask_epi8(_mm256_and_si256(ge, le)));
    word |= static_cast<uint64_t>(bits) << (32 * half);
  }
  return word;
#else
  uint64_t word = 0;
  for (int i = 0; i < 64; ++i) word |= static_cast<uint64_t>(lower <= p[i] && p[i] <= upper) << i;
  return word;
#endif
}

inline uint64_t match_tail(const uint8_t* p, std::size_t n, uint8_t lower, uint8_t upper) {
  uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) word |= static_cast<uint64_t>(lower <= p[i] && p[i] <= upper) << i;
  return word;
}

void check_predicate(ScanPredicate pred) {
  if (pred.lower > pred.upper) throw ConfigError("scan predicate lower bound exceeds upper bound");
}

}  // namespace

void scan_bitvector(const Column8& column, ScanPredicate pred, unsigned threads, BitVector& out) {
  check_predicate(pred);
  if (threads == 0) throw ConfigError("threads must be at least 1");
  const uint64_t n = column.length();
  if (out.words.size() < (n + 63) / 64) throw ConfigError("bit vector too small for column");
  out.length_bits = n;
  const uint8_t* data = column.values.data();
  uint64_t* words = out.words.data();
  run_team(threads, [&](unsigned tid) {
    const ChunkRange chunk = chunk_for(n, tid, threads, 64);
    uint64_t row = chunk.begin;
    for (; row + 64 <= chunk.end; row += 64) words[row / 64] = match_word(data + row, pred.lower, pred.upper);
    if (row < chunk.end) words[row / 64] = match_tail(data + row, chunk.end - row, pred.lower, pred.upper);
  });
}

BitVector scan_bitvector(const Column8& column, ScanPredicate pred, unsigned threads) {
  BitVector out(column.length());
  scan_bitvector(column, pred, threads, out);
  return out;
}

void scan_indexes(const Column8& column, ScanPredicate pred, unsigned threads, IndexVector& out) {
  check_predicate(pred);
  if (threads == 0) throw ConfigError("threads must be at least 1");
  const uint64_t n = column.length();
  if (out.slots.size() < n) throw ConfigError("index buffer smaller than column");
  out.segments.assign(threads, {});
  const uint8_t* data = column.values.data();
  uint64_t* slots = out.slots.data();
  run_team(threads, [&](unsigned tid) {
    const ChunkRange chunk = chunk_for(n, tid, threads, 64);
    uint64_t* dst = slots + chunk.begin;
    uint64_t row = chunk.begin;
    for (; row < chunk.end; row += 64) {
      const std::size_t width = std::min<uint64_t>(64, chunk.end - row);
      uint64_t word = width == 64 ? match_word(data + row, pred.lower, pred.upper)
                                  : match_tail(data + row, width, pred.lower, pred.upper);
      while (word != 0) {
        *dst++ = row + static_cast<uint64_t>(std::countr_zero(word));
        word &= word - 1;
      }
    }
    out.segments[tid] = {chunk.begin, static_cast<uint64_t>(dst - (slots + chunk.begin))};
  });
}

IndexVector scan_indexes(const Column8& column, ScanPredicate pred, unsigned threads) {
  IndexVector out(column.length());
  scan_indexes(column, pred, threads, out);
  return out;
}

BitVector scan_bitvector_scalar(std::span<const uint8_t> column, ScanPredicate pred) {
  BitVector out(column.size());
  for (std::size_t w = 0; w < out.words.size(); ++w) out.words[w] = 0;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (pred.matches(column[i])) out.words[i / 64] |= uint64_t{1} << (i % 64);
  }
  return out;
}

std::vector<uint64_t> scan_indexes_scalar(std::span<const uint8_t> column, ScanPredicate pred) {
  std::vector<uint64_t> out;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (pred.matches(column[i])) out.push_back(i);
  }
  return out;
}

}  // namespace olap

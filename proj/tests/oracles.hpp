#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "olap/tuple.hpp"

namespace olap::testing {

inline bool row_less(const JoinRow& a, const JoinRow& b) {
  return std::tie(a.key, a.left_payload, a.right_payload) < std::tie(b.key, b.left_payload, b.right_payload);
}

inline bool row_equal(const JoinRow& a, const JoinRow& b) {
  return a.key == b.key && a.left_payload == b.left_payload && a.right_payload == b.right_payload;
}

/// Sort-merge equi-join; rows come back sorted.
inline std::vector<JoinRow> sort_merge_join(std::span<const Tuple> build, std::span<const Tuple> probe) {
  std::vector<Tuple> r(build.begin(), build.end());
  std::vector<Tuple> s(probe.begin(), probe.end());
  auto by_key = [](const Tuple& a, const Tuple& b) { return std::tie(a.key, a.payload) < std::tie(b.key, b.payload); };
  std::sort(r.begin(), r.end(), by_key);
  std::sort(s.begin(), s.end(), by_key);
  std::vector<JoinRow> out;
  std::size_t i = 0, j = 0;
  while (i < r.size() && j < s.size()) {
    if (r[i].key < s[j].key) {
      ++i;
    } else if (s[j].key < r[i].key) {
      ++j;
    } else {
      const uint32_t k = r[i].key;
      std::size_t i_end = i, j_end = j;
      while (i_end < r.size() && r[i_end].key == k) ++i_end;
      while (j_end < s.size() && s[j_end].key == k) ++j_end;
      for (std::size_t a = i; a < i_end; ++a) {
        for (std::size_t b = j; b < j_end; ++b) out.push_back({k, r[a].payload, s[b].payload});
      }
      i = i_end;
      j = j_end;
    }
  }
  std::sort(out.begin(), out.end(), row_less);
  return out;
}

inline std::vector<JoinRow> sorted_rows(std::span<const JoinRow> rows) {
  std::vector<JoinRow> out(rows.begin(), rows.end());
  std::sort(out.begin(), out.end(), row_less);
  return out;
}

inline bool same_rows(const std::vector<JoinRow>& a, const std::vector<JoinRow>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), row_equal);
}

inline std::vector<uint64_t> sorted_keys(std::span<const Tuple> tuples) {
  std::vector<uint64_t> out;
  out.reserve(tuples.size());
  for (const auto& t : tuples) out.push_back((uint64_t{t.key} << 32) | t.payload);
  std::sort(out.begin(), out.end());
  return out;
}

inline Relation relation_of(std::initializer_list<uint32_t> keys) {
  Relation r;
  for (uint32_t k : keys) r.tuples.push_back({k, k});
  return r;
}

}  // namespace olap::testing

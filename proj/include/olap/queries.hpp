#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "olap/histogram.hpp"
#include "olap/joins.hpp"
#include "olap/sync.hpp"
#include "olap/tpch_lite.hpp"

namespace olap {

/// Predicate constants of the simplified plans: the standard TPC-H validation parameters,
/// mapped through the tpch-lite dictionaries. Dates are days since 1970-01-01, ranges inclusive
/// on the lower and exclusive on the upper end unless noted.
struct QueryParameters {
  struct Q3 {
    int32_t segment;  // mktsegment = BUILDING
    int32_t date;     // o_orderdate < date, l_shipdate > date (1995-03-15)
  } q3;
  struct Q10 {
    int32_t order_from;  // 1993-10-01
    int32_t order_to;    // 1994-01-01
    int32_t returnflag;  // R
  } q10;
  struct Q12 {
    std::vector<int32_t> shipmodes;  // MAIL, SHIP
    int32_t receipt_from;            // 1994-01-01
    int32_t receipt_to;              // 1995-01-01
  } q12;
  struct Q19Group {
    int32_t brand;
    std::vector<int32_t> containers;
    int32_t quantity_min, quantity_max;  // inclusive
    int32_t size_min, size_max;          // inclusive
  };
  struct Q19 {
    std::vector<Q19Group> groups;
    std::vector<int32_t> shipmodes;  // AIR, REG AIR
    int32_t shipinstruct;            // DELIVER IN PERSON
  } q19;

  static QueryParameters defaults();
};

struct QueryOptions {
  unsigned threads = 1;
  JoinAlgorithm join_kind = JoinAlgorithm::rho;
  KernelVariant kernel_variant = KernelVariant::naive;
  QueueKind queue_kind = QueueKind::lockfree;
};

struct OperatorTiming {
  std::string name;
  uint64_t elapsed_ns = 0;
  uint64_t output_rows = 0;
};

struct QueryResult {
  uint64_t count = 0;
  std::vector<OperatorTiming> operators;
  uint64_t total_ns = 0;
};

/// Supported query ids: 3, 10, 12, 19.
const std::vector<int>& supported_queries();

/// Operator-at-a-time execution: every scan, join and projection materializes its output
/// before the next operator starts. The primary-key side is always the build side.
/// Throws ConfigError for an unknown query id.
QueryResult run_query(int query_id, const tpch::TpchLiteDB& db, const QueryOptions& opts,
                      const QueryParameters& params = QueryParameters::defaults());

/// Nested-loop evaluation of the same predicates, for small databases only.
uint64_t reference_count(int query_id, const tpch::TpchLiteDB& db,
                         const QueryParameters& params = QueryParameters::defaults());

}  // namespace olap

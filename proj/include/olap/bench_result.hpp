#pragma once

#include <cstdint>
#include <string>

namespace olap {

/// One micro-benchmark measurement. `metric` is derived from the other fields:
/// ns_per_op = elapsed_ns / op_count, gb_per_s = bytes_touched / elapsed_ns,
/// ops_per_s = op_count / (elapsed_ns * 1e-9).
struct MicrobenchResult {
  enum class Unit { ns_per_op, gb_per_s, ops_per_s };

  uint64_t op_count = 0;
  uint64_t elapsed_ns = 0;
  uint64_t bytes_touched = 0;
  Unit unit = Unit::ns_per_op;
  double metric = 0.0;
  /// Value folded from the benchmark's data so the work cannot be elided.
  uint64_t checksum = 0;

  static double derive(Unit unit, uint64_t op_count, uint64_t elapsed_ns, uint64_t bytes_touched);
  void finalize() { metric = derive(unit, op_count, elapsed_ns, bytes_touched); }
};

std::string to_string(MicrobenchResult::Unit unit);

}  // namespace olap

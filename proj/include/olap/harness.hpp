#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "olap/buffer.hpp"
#include "olap/histogram.hpp"
#include "olap/joins.hpp"
#include "olap/microbench.hpp"
#include "olap/placement.hpp"
#include "olap/sync.hpp"

namespace olap {

enum class VerifyMode { automatic, on, off };
enum class OutputFormat { csv, json };

VerifyMode parse_verify_mode(std::string_view name);
std::string_view to_string(VerifyMode mode);
OutputFormat parse_output_format(std::string_view name);
std::string_view to_string(AllocMode mode);
AllocMode parse_alloc_mode(std::string_view name);

/// One benchmark run. Fields irrelevant to the chosen experiment are still echoed in every row.
struct BenchConfig {
  /// join | scan | micro | query
  std::string experiment = "join";

  // join, and micro kind "hist" (build side only)
  JoinAlgorithm algo = JoinAlgorithm::rho;
  uint64_t build_tuples = tuples_for_megabytes(25);
  uint64_t probe_tuples = tuples_for_megabytes(100);
  /// Both zero: pick suggested_radix_bits(build_tuples).
  unsigned radix_bits1 = 0;
  unsigned radix_bits2 = 0;
  bool materialize = false;

  // scan
  double selectivity = 0.5;
  /// bitvector | indexes
  std::string scan_output = "bitvector";
  uint64_t column_bytes = uint64_t{64} << 20;

  // micro: chase | randwrite | read | write | queue | hist
  std::string micro = "chase";
  uint64_t array_bytes = uint64_t{64} << 20;
  AccessWidth width = AccessWidth::bits64;
  /// Chain steps, random writes or queue tasks.
  uint64_t ops = 10'000'000;
  uint64_t address_mask = ~0ULL;
  uint64_t task_cost_ns = 0;
  uint64_t min_duration_ns = 200'000'000;

  // query
  int query = 3;
  double scale_factor = 0.01;

  unsigned threads = 1;
  unsigned repetitions = 10;
  KernelVariant kernel = KernelVariant::naive;
  QueueKind queue = QueueKind::lockfree;
  AllocMode alloc = AllocMode::prealloc_touch;
  Placement placement = Placement::none;
  uint64_t seed = 42;
  VerifyMode verify = VerifyMode::automatic;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
  /// Flattened name/value pairs, in CSV column order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// One output row. row_kind is "raw" (repetition >= 0), "mean" or "stddev" (repetition -1).
struct ResultRecord {
  std::vector<std::pair<std::string, std::string>> config;
  std::string timer;
  std::string row_kind = "raw";
  int64_t repetition = 0;
  double elapsed_ns = 0;
  double throughput = 0;
  std::string throughput_unit;
  uint64_t result_count = 0;
  double page_faults = 0;
  /// yes | no | skipped
  std::string verified = "skipped";
  /// Keyed by phase name without the column prefix; absent phases are empty cells.
  std::map<std::string, double> phases_ns;
  /// "name:ns:rows" entries joined by ';' (queries only).
  std::string operators;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// Phase names with a fixed CSV column each ("phase_<name>_ns").
const std::vector<std::string>& phase_names();
/// Config column names in echo() order.
std::vector<std::string> config_columns();
/// Full CSV header, in order.
std::vector<std::string> csv_header();

/// How throughput is derived from elapsed time and the constant work of one repetition.
struct ThroughputRule {
  enum class Kind { per_second, bytes_per_ns, ns_per_op };
  Kind kind = Kind::per_second;
  double work = 0;
  std::string unit;

  double apply(double elapsed_ns) const;
};

/// Mean and sample standard deviation rows over `raw` (all from one experiment).
/// The mean row's throughput is rule.apply(mean elapsed); the stddev row's is the standard
/// deviation of the raw throughputs.
std::pair<ResultRecord, ResultRecord> summarize(const std::vector<ResultRecord>& raw, const ThroughputRule& rule);

/// Runs the configured benchmark `repetitions` times. Returns the raw rows followed by the mean
/// and stddev rows. Throws UnsupportedError when the placement cannot be satisfied.
std::vector<ResultRecord> run_experiment(const BenchConfig& config);

void emit_results(const std::vector<ResultRecord>& records, std::ostream& out, OutputFormat format);
void emit_results(const std::vector<ResultRecord>& records, const std::filesystem::path& path, OutputFormat format);

std::vector<ResultRecord> read_results_json(const std::filesystem::path& path);
/// Parses rows written by emit_results(csv). Numbers come back at CSV precision.
std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path);

/// Float formatting used in CSV cells (6 significant digits).
std::string format_float(double v);

/// Cache directory from OLAPBENCH_DATA_DIR, if set.
std::optional<std::filesystem::path> data_cache_dir();

/// Writes generated inputs for `config` into `dir` (FK relations, TPC-H-lite tables).
/// Returns the files or directories written.
std::vector<std::filesystem::path> generate_inputs(const BenchConfig& config, const std::filesystem::path& dir);

}  // namespace olap

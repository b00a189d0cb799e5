#include "olap/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <json.hpp>
#include <sstream>

#include "olap/datagen.hpp"
#include "olap/errors.hpp"
#include "olap/queries.hpp"
#include "olap/random.hpp"
#include "olap/scans.hpp"
#include "olap/team.hpp"
#include "olap/timer.hpp"
#include "olap/tpch_lite.hpp"

namespace olap {

namespace {

constexpr uint64_t kVerifyLimitBytes = uint64_t{1} << 30;

std::string u64(uint64_t v) { return std::to_string(v); }

std::string hex(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "0x%" PRIx64, v);
  return buf;
}

uint64_t fk_bytes(const BenchConfig& c) { return (c.build_tuples + c.probe_tuples) * sizeof(Tuple); }

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = {"timer",           "row_kind",     "repetition", "elapsed_ns",
                                                "throughput",      "throughput_unit", "result_count", "page_faults",
                                                "verified"};
  return cols;
}

std::string phase_column(const std::string& name) { return "phase_" + name + "_ns"; }

double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1); zero for fewer than two values.
double stddev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

std::string integral_or_float(double v, bool integral) {
  if (integral) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  return format_float(v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cells.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back();
    } else {
      cells.back() += ch;
    }
  }
  return cells;
}

double parse_double(const std::string& s, const std::string& column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("column " + column + ": not a number: '" + s + "'");
  }
}

/// Restores the team's pinning and the calling thread's affinity on scope exit.
class PlacementScope {
 public:
  explicit PlacementScope(const BenchConfig& c) {
    if (c.placement == Placement::none) return;
    report_ = pin_threads(c.placement, c.threads);
    active_ = true;
    topo_ = read_topology();
  }
  ~PlacementScope() {
    if (!active_) return;
    set_worker_cpus({});
    unbind_current_thread(topo_);
  }
  PlacementScope(const PlacementScope&) = delete;
  PlacementScope& operator=(const PlacementScope&) = delete;

  /// Runs `fn` with the calling thread on the data node so first touch lands there.
  template <class Fn>
  auto on_data_node(Fn&& fn) {
    if (active_) bind_current_thread_to_node(topo_, report_.data_node);
    auto result = fn();
    if (active_) unbind_current_thread(topo_);
    return result;
  }

 private:
  bool active_ = false;
  PlacementReport report_;
  Topology topo_;
};

FkPair load_fk_pair(const BenchConfig& c) {
  const auto dir = data_cache_dir();
  if (!dir) return generate_fk_pair(c.build_tuples, c.probe_tuples, c.seed);
  const std::string stem = "fk_b" + u64(c.build_tuples) + "_p" + u64(c.probe_tuples) + "_s" + u64(c.seed);
  const auto build_path = *dir / (stem + ".build.rel");
  const auto probe_path = *dir / (stem + ".probe.rel");
  if (std::filesystem::exists(build_path) && std::filesystem::exists(probe_path)) {
    return {read_relation(build_path), read_relation(probe_path)};
  }
  FkPair fk = generate_fk_pair(c.build_tuples, c.probe_tuples, c.seed);
  std::filesystem::create_directories(*dir);
  write_relation(build_path, fk.build);
  write_relation(probe_path, fk.probe);
  return fk;
}

std::string tpch_dir_name(const BenchConfig& c) { return "tpch_sf" + format_float(c.scale_factor) + "_s" + u64(c.seed); }

tpch::TpchLiteDB load_tpch(const BenchConfig& c) {
  const auto dir = data_cache_dir();
  if (!dir) return tpch::generate_tpch_lite(c.scale_factor, c.seed);
  const auto path = *dir / tpch_dir_name(c);
  if (std::filesystem::exists(path / "manifest.json")) return tpch::read_tpch_lite(path);
  auto db = tpch::generate_tpch_lite(c.scale_factor, c.seed);
  tpch::write_tpch_lite(path, db);
  return db;
}

bool should_verify(VerifyMode mode, uint64_t data_bytes) {
  if (mode == VerifyMode::on) return true;
  if (mode == VerifyMode::off) return false;
  return data_bytes <= kVerifyLimitBytes;
}

const char* yes_no(bool ok) { return ok ? "yes" : "no"; }

/// Result of one repetition, before the config echo is attached.
struct Sample {
  uint64_t elapsed_ns = 0;
  uint64_t page_faults = 0;
  uint64_t result_count = 0;
  std::string verified = "skipped";
  std::map<std::string, double> phases;
  std::vector<OperatorTiming> operators;
};

struct Plan {
  ThroughputRule rule;
  std::function<Sample(unsigned)> repetition;
};

std::string operators_cell(const std::vector<OperatorTiming>& ops) {
  std::string out;
  for (const auto& op : ops) {
    if (!out.empty()) out += ';';
    out += op.name + ":" + u64(op.elapsed_ns) + ":" + u64(op.output_rows);
  }
  return out;
}

Plan plan_join(const BenchConfig& c, PlacementScope& scope) {
  auto fk = std::make_shared<FkPair>(scope.on_data_node([&] { return load_fk_pair(c); }));
  const bool verify = should_verify(c.verify, fk_bytes(c));

  JoinOptions opts;
  opts.threads = c.threads;
  opts.radix_bits_pass1 = c.radix_bits1;
  opts.radix_bits_pass2 = c.radix_bits2;
  opts.kernel_variant = c.kernel;
  opts.queue_kind = c.queue;
  opts.materialize = c.materialize;

  Plan plan;
  plan.rule = {ThroughputRule::Kind::per_second, static_cast<double>(c.build_tuples + c.probe_tuples), "rows/s"};
  plan.repetition = [c, fk, opts, verify](unsigned) {
    AlignedBuffer<JoinRow> out;
    if (c.materialize) out = allocate_join_output(fk->probe.cardinality(), c.alloc);

    Sample s;
    const uint64_t faults0 = minor_page_faults();
    Stopwatch watch;
    JoinResult r = run_join(c.algo, fk->build, fk->probe, opts, std::move(out));
    s.elapsed_ns = watch.elapsed_ns();
    s.page_faults = minor_page_faults() - faults0;

    s.result_count = r.match_count;
    for (const auto& [name, ns] : r.phase_times) s.phases[name] = static_cast<double>(ns);
    if (verify) {
      bool ok = r.match_count == fk->probe.cardinality();
      if (c.materialize) {
        ok = ok && r.output && r.output->size == r.match_count;
        if (ok) {
          uint64_t expect = 0, got = 0;
          for (const auto& t : fk->probe.tuples) expect += t.key;
          for (const auto& row : r.output->rows()) {
            ok = ok && row.key == row.left_payload && row.key == row.right_payload;
            got += row.key;
          }
          ok = ok && got == expect;
        }
      }
      s.verified = yes_no(ok);
    }
    return s;
  };
  return plan;
}

Plan plan_scan(const BenchConfig& c, PlacementScope& scope) {
  if (c.scan_output != "bitvector" && c.scan_output != "indexes") {
    throw ConfigError("scan output must be bitvector or indexes, got " + c.scan_output);
  }
  auto column = std::make_shared<Column8>(scope.on_data_node([&] { return generate_column(c.column_bytes, c.seed); }));
  const ScanPredicate pred = ScanPredicate::for_selectivity(c.selectivity);
  const bool verify = should_verify(c.verify, c.column_bytes);

  Plan plan;
  plan.rule = {ThroughputRule::Kind::bytes_per_ns, static_cast<double>(c.column_bytes), "GB/s"};
  plan.repetition = [c, column, pred, verify](unsigned) {
    Sample s;
    if (c.scan_output == "bitvector") {
      BitVector out(column->length(), c.alloc);
      const uint64_t faults0 = minor_page_faults();
      Stopwatch watch;
      scan_bitvector(*column, pred, c.threads, out);
      s.elapsed_ns = watch.elapsed_ns();
      s.page_faults = minor_page_faults() - faults0;
      s.result_count = out.popcount();
      if (verify) {
        const BitVector ref = scan_bitvector_scalar(column->view(), pred);
        s.verified = yes_no(std::equal(ref.words.begin(), ref.words.end(), out.words.begin()));
      }
    } else {
      IndexVector out(column->length(), c.alloc);
      const uint64_t faults0 = minor_page_faults();
      Stopwatch watch;
      scan_indexes(*column, pred, c.threads, out);
      s.elapsed_ns = watch.elapsed_ns();
      s.page_faults = minor_page_faults() - faults0;
      s.result_count = out.count();
      if (verify) s.verified = yes_no(out.flatten() == scan_indexes_scalar(column->view(), pred));
    }
    return s;
  };
  return plan;
}

Sample from_micro(const MicrobenchResult& r, uint64_t faults0) {
  Sample s;
  s.elapsed_ns = r.elapsed_ns;
  s.page_faults = minor_page_faults() - faults0;
  s.result_count = r.op_count;
  return s;
}

Plan plan_micro(const BenchConfig& c, PlacementScope& scope) {
  Plan plan;
  const std::string& kind = c.micro;
  if (kind == "chase" || kind == "randwrite") {
    plan.rule = {ThroughputRule::Kind::ns_per_op, static_cast<double>(c.ops), "ns/op"};
    plan.repetition = [c](unsigned rep) {
      const uint64_t faults0 = minor_page_faults();
      const uint64_t seed = derive_seed(c.seed, rep);
      const MicrobenchResult r = c.micro == "chase" ? chase_chain(c.array_bytes, c.ops, seed)
                                                    : random_writes(c.array_bytes, c.ops, seed, c.address_mask);
      return from_micro(r, faults0);
    };
  } else if (kind == "read" || kind == "write") {
    const bool write = kind == "write";
    LinearOptions calib;
    calib.min_duration_ns = c.min_duration_ns;
    // Untimed calibration fixes the pass count so every repetition does the same work.
    const MicrobenchResult probe = write ? linear_write(c.array_bytes, c.width, c.threads, calib)
                                         : linear_read(c.array_bytes, c.width, c.threads, calib);
    LinearOptions fixed;
    fixed.fixed_passes = std::max<uint64_t>(1, probe.bytes_touched / std::max<uint64_t>(1, c.array_bytes));
    plan.rule = {ThroughputRule::Kind::bytes_per_ns, static_cast<double>(fixed.fixed_passes * c.array_bytes), "GB/s"};
    plan.repetition = [c, write, fixed](unsigned) {
      const uint64_t faults0 = minor_page_faults();
      const MicrobenchResult r = write ? linear_write(c.array_bytes, c.width, c.threads, fixed)
                                       : linear_read(c.array_bytes, c.width, c.threads, fixed);
      Sample s = from_micro(r, faults0);
      if (!write && should_verify(c.verify, c.array_bytes)) {
        const uint64_t words = c.array_bytes / 8;
        s.verified = yes_no(r.checksum == words * (words - 1) / 2);
      }
      return s;
    };
  } else if (kind == "queue") {
    plan.rule = {ThroughputRule::Kind::per_second, static_cast<double>(c.ops), "tasks/s"};
    plan.repetition = [c](unsigned) {
      const uint64_t faults0 = minor_page_faults();
      const ContentionResult r = contention_bench(c.queue, c.threads, c.ops, c.task_cost_ns);
      Sample s = from_micro(r.metrics, faults0);
      s.result_count = r.consumed;
      s.verified = yes_no(r.duplicates == 0 && r.missing == 0 && r.consumed == c.ops);
      return s;
    };
  } else if (kind == "hist") {
    auto build = std::make_shared<Relation>(
        scope.on_data_node([&] { return generate_fk_pair(c.build_tuples, 0, c.seed).build; }));
    plan.rule = {ThroughputRule::Kind::per_second, static_cast<double>(c.build_tuples), "rows/s"};
    plan.repetition = [c, build](unsigned) {
      Sample s;
      const uint64_t faults0 = minor_page_faults();
      Stopwatch watch;
      const Histogram h = compute_histogram(build->view(), c.radix_bits1, 0, c.kernel);
      s.elapsed_ns = watch.elapsed_ns();
      s.page_faults = minor_page_faults() - faults0;
      s.result_count = h.total();
      if (should_verify(c.verify, c.build_tuples * sizeof(Tuple))) {
        s.verified = yes_no(h == compute_histogram(build->view(), c.radix_bits1, 0, KernelVariant::naive));
      }
      return s;
    };
  } else {
    throw ConfigError("unknown micro benchmark: " + kind);
  }
  return plan;
}

Plan plan_query(const BenchConfig& c, PlacementScope& scope) {
  const auto& ids = supported_queries();
  if (std::find(ids.begin(), ids.end(), c.query) == ids.end()) {
    throw ConfigError("unsupported query: " + std::to_string(c.query));
  }
  auto db = std::make_shared<tpch::TpchLiteDB>(scope.on_data_node([&] { return load_tpch(c); }));
  // The reference executor is nested-loop, so automatic verification is kept to tiny databases.
  const bool verify = c.verify == VerifyMode::on || (c.verify == VerifyMode::automatic && c.scale_factor <= 0.001);
  auto expected = std::make_shared<std::optional<uint64_t>>();

  QueryOptions opts;
  opts.threads = c.threads;
  opts.join_kind = c.algo;
  opts.kernel_variant = c.kernel;
  opts.queue_kind = c.queue;

  Plan plan;
  plan.rule = {ThroughputRule::Kind::per_second, 1.0, "queries/s"};
  plan.repetition = [c, db, opts, verify, expected](unsigned) {
    Sample s;
    const uint64_t faults0 = minor_page_faults();
    Stopwatch watch;
    QueryResult r = run_query(c.query, *db, opts);
    s.elapsed_ns = watch.elapsed_ns();
    s.page_faults = minor_page_faults() - faults0;
    s.result_count = r.count;
    s.operators = std::move(r.operators);
    if (verify) {
      if (!*expected) *expected = reference_count(c.query, *db);
      s.verified = yes_no(**expected == r.count);
    }
    return s;
  };
  return plan;
}

BenchConfig resolved(BenchConfig c) {
  if ((c.experiment == "join" || c.experiment == "micro") && c.radix_bits1 == 0 && c.radix_bits2 == 0) {
    const auto [b1, b2] = suggested_radix_bits(c.build_tuples);
    c.radix_bits1 = b1;
    c.radix_bits2 = b2;
  }
  return c;
}

ResultRecord base_record(const BenchConfig& c) {
  ResultRecord r;
  r.config = c.echo();
  r.timer = std::string(CycleClock::source());
  return r;
}

}  // namespace

VerifyMode parse_verify_mode(std::string_view name) {
  if (name == "auto") return VerifyMode::automatic;
  if (name == "on") return VerifyMode::on;
  if (name == "off") return VerifyMode::off;
  throw ConfigError("unknown verify mode: " + std::string(name));
}

std::string_view to_string(VerifyMode mode) {
  switch (mode) {
    case VerifyMode::automatic:
      return "auto";
    case VerifyMode::on:
      return "on";
    case VerifyMode::off:
      return "off";
  }
  return "?";
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format: " + std::string(name));
}

AllocMode parse_alloc_mode(std::string_view name) {
  if (name == "prealloc" || name == "prealloc_touch") return AllocMode::prealloc_touch;
  if (name == "lazy") return AllocMode::lazy;
  throw ConfigError("unknown allocation mode: " + std::string(name));
}

std::string_view to_string(AllocMode mode) { return mode == AllocMode::lazy ? "lazy" : "prealloc"; }

void BenchConfig::validate() const {
  static const std::vector<std::string> experiments = {"join", "scan", "micro", "query"};
  if (std::find(experiments.begin(), experiments.end(), experiment) == experiments.end()) {
    throw ConfigError("unknown experiment: " + experiment);
  }
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (!(selectivity > 0.0) || selectivity > 1.0) throw ConfigError("selectivity must be in (0, 1]");
  if (scale_factor <= 0.0) throw ConfigError("scale factor must be positive");
}

std::vector<std::pair<std::string, std::string>> BenchConfig::echo() const {
  return {
      {"experiment", experiment},
      {"algo", std::string(to_string(algo))},
      {"build_tuples", u64(build_tuples)},
      {"probe_tuples", u64(probe_tuples)},
      {"radix_bits1", u64(radix_bits1)},
      {"radix_bits2", u64(radix_bits2)},
      {"materialize", materialize ? "true" : "false"},
      {"selectivity", format_float(selectivity)},
      {"scan_output", scan_output},
      {"column_bytes", u64(column_bytes)},
      {"micro", micro},
      {"array_bytes", u64(array_bytes)},
      {"width", std::string(to_string(width))},
      {"ops", u64(ops)},
      {"address_mask", hex(address_mask)},
      {"task_cost_ns", u64(task_cost_ns)},
      {"min_duration_ns", u64(min_duration_ns)},
      {"query", std::to_string(query)},
      {"scale_factor", format_float(scale_factor)},
      {"threads", u64(threads)},
      {"repetitions", u64(repetitions)},
      {"kernel", std::string(to_string(kernel))},
      {"queue", std::string(to_string(queue))},
      {"alloc", std::string(to_string(alloc))},
      {"placement", std::string(to_string(placement))},
      {"seed", u64(seed)},
      {"verify", std::string(to_string(verify))},
  };
}

const std::vector<std::string>& phase_names() {
  static const std::vector<std::string> names = {"hist1", "copy1", "hist2", "copy2",
                                                 "copy",  "crack", "build", "probe"};
  return names;
}

std::vector<std::string> config_columns() {
  std::vector<std::string> cols;
  for (const auto& [name, value] : BenchConfig{}.echo()) cols.push_back(name);
  return cols;
}

std::vector<std::string> csv_header() {
  std::vector<std::string> cols = config_columns();
  for (const auto& c : result_columns()) cols.push_back(c);
  for (const auto& p : phase_names()) cols.push_back(phase_column(p));
  cols.push_back("operators");
  return cols;
}

double ThroughputRule::apply(double elapsed_ns) const {
  if (elapsed_ns <= 0) return 0.0;
  switch (kind) {
    case Kind::per_second:
      return work / (elapsed_ns * 1e-9);
    case Kind::bytes_per_ns:
      return work / elapsed_ns;
    case Kind::ns_per_op:
      return work == 0 ? 0.0 : elapsed_ns / work;
  }
  return 0.0;
}

std::string format_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::pair<ResultRecord, ResultRecord> summarize(const std::vector<ResultRecord>& raw, const ThroughputRule& rule) {
  if (raw.empty()) throw ConfigError("no raw rows to summarize");
  ResultRecord mean = raw.front();
  mean.row_kind = "mean";
  mean.repetition = -1;
  ResultRecord sd = mean;
  sd.row_kind = "stddev";

  auto column = [&](auto get) {
    std::vector<double> xs;
    for (const auto& r : raw) xs.push_back(get(r));
    return xs;
  };
  const auto elapsed = column([](const ResultRecord& r) { return r.elapsed_ns; });
  const auto thr = column([](const ResultRecord& r) { return r.throughput; });
  const auto faults = column([](const ResultRecord& r) { return r.page_faults; });

  mean.elapsed_ns = mean_of(elapsed);
  sd.elapsed_ns = stddev_of(elapsed);
  mean.throughput = rule.apply(mean.elapsed_ns);
  sd.throughput = stddev_of(thr);
  mean.page_faults = mean_of(faults);
  sd.page_faults = stddev_of(faults);

  bool any_no = false, all_yes = true;
  for (const auto& r : raw) {
    any_no = any_no || r.verified == "no";
    all_yes = all_yes && r.verified == "yes";
  }
  mean.verified = sd.verified = any_no ? "no" : (all_yes ? "yes" : "skipped");

  mean.phases_ns.clear();
  sd.phases_ns.clear();
  for (const auto& p : phase_names()) {
    std::vector<double> xs;
    for (const auto& r : raw) {
      if (auto it = r.phases_ns.find(p); it != r.phases_ns.end()) xs.push_back(it->second);
    }
    if (xs.size() != raw.size()) continue;
    mean.phases_ns[p] = mean_of(xs);
    sd.phases_ns[p] = stddev_of(xs);
  }
  mean.operators.clear();
  sd.operators.clear();
  return {mean, sd};
}

std::vector<ResultRecord> run_experiment(const BenchConfig& config) {
  config.validate();
  const BenchConfig c = resolved(config);
  PlacementScope scope(c);

  Plan plan;
  if (c.experiment == "join") {
    plan = plan_join(c, scope);
  } else if (c.experiment == "scan") {
    plan = plan_scan(c, scope);
  } else if (c.experiment == "micro") {
    plan = plan_micro(c, scope);
  } else {
    plan = plan_query(c, scope);
  }

  std::vector<ResultRecord> rows;
  // Per-operator means for the mean row.
  std::vector<std::string> op_names;
  std::map<std::string, std::vector<double>> op_ns;
  std::map<std::string, uint64_t> op_rows;
  for (unsigned rep = 0; rep < c.repetitions; ++rep) {
    Sample s = plan.repetition(rep);
    ResultRecord r = base_record(c);
    r.repetition = rep;
    r.elapsed_ns = static_cast<double>(s.elapsed_ns);
    r.throughput = plan.rule.apply(r.elapsed_ns);
    r.throughput_unit = plan.rule.unit;
    r.result_count = s.result_count;
    r.page_faults = static_cast<double>(s.page_faults);
    r.verified = s.verified;
    r.phases_ns = std::move(s.phases);
    r.operators = operators_cell(s.operators);
    for (const auto& op : s.operators) {
      if (op_ns.find(op.name) == op_ns.end()) op_names.push_back(op.name);
      op_ns[op.name].push_back(static_cast<double>(op.elapsed_ns));
      op_rows[op.name] = op.output_rows;
    }
    rows.push_back(std::move(r));
  }

  auto [mean, sd] = summarize(rows, plan.rule);
  std::vector<OperatorTiming> mean_ops;
  for (const auto& name : op_names) {
    mean_ops.push_back({name, static_cast<uint64_t>(std::llround(mean_of(op_ns[name]))), op_rows[name]});
  }
  mean.operators = operators_cell(mean_ops);
  rows.push_back(std::move(mean));
  rows.push_back(std::move(sd));
  return rows;
}

void emit_results(const std::vector<ResultRecord>& records, std::ostream& out, OutputFormat format) {
  const auto header = csv_header();
  if (format == OutputFormat::json) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : records) {
      nlohmann::ordered_json row;
      for (const auto& [k, v] : r.config) row[k] = v;
      row["timer"] = r.timer;
      row["row_kind"] = r.row_kind;
      row["repetition"] = r.repetition;
      row["elapsed_ns"] = r.elapsed_ns;
      row["throughput"] = r.throughput;
      row["throughput_unit"] = r.throughput_unit;
      row["result_count"] = r.result_count;
      row["page_faults"] = r.page_faults;
      row["verified"] = r.verified;
      for (const auto& p : phase_names()) {
        auto it = r.phases_ns.find(p);
        row[phase_column(p)] = it == r.phases_ns.end() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(it->second);
      }
      row["operators"] = r.operators;
      rows.push_back(std::move(row));
    }
    out << rows.dump(2) << '\n';
    return;
  }

  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : records) {
    const bool raw = r.row_kind == "raw";
    std::vector<std::string> cells;
    for (const auto& [k, v] : r.config) cells.push_back(v);
    cells.push_back(r.timer);
    cells.push_back(r.row_kind);
    cells.push_back(std::to_string(r.repetition));
    cells.push_back(integral_or_float(r.elapsed_ns, raw));
    cells.push_back(format_float(r.throughput));
    cells.push_back(r.throughput_unit);
    cells.push_back(u64(r.result_count));
    cells.push_back(integral_or_float(r.page_faults, raw));
    cells.push_back(r.verified);
    for (const auto& p : phase_names()) {
      auto it = r.phases_ns.find(p);
      cells.push_back(it == r.phases_ns.end() ? "" : integral_or_float(it->second, raw));
    }
    cells.push_back(r.operators);
    if (cells.size() != header.size()) throw ConfigError("record does not match the CSV header");
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_escape(cells[i]);
    out << '\n';
  }
}

void emit_results(const std::vector<ResultRecord>& records, const std::filesystem::path& path, OutputFormat format) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_results(records, out, format);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<ResultRecord> read_results_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  nlohmann::ordered_json rows;
  try {
    in >> rows;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  std::vector<ResultRecord> out;
  try {
    for (const auto& row : rows) {
      ResultRecord r;
      for (const auto& col : config_columns()) r.config.emplace_back(col, row.at(col).get<std::string>());
      r.timer = row.at("timer").get<std::string>();
      r.row_kind = row.at("row_kind").get<std::string>();
      r.repetition = row.at("repetition").get<int64_t>();
      r.elapsed_ns = row.at("elapsed_ns").get<double>();
      r.throughput = row.at("throughput").get<double>();
      r.throughput_unit = row.at("throughput_unit").get<std::string>();
      r.result_count = row.at("result_count").get<uint64_t>();
      r.page_faults = row.at("page_faults").get<double>();
      r.verified = row.at("verified").get<std::string>();
      for (const auto& p : phase_names()) {
        const auto& v = row.at(phase_column(p));
        if (!v.is_null()) r.phases_ns[p] = v.get<double>();
      }
      r.operators = row.at("operators").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return out;
}

std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header");
  const auto header = csv_split(line);
  if (header != csv_header()) throw FormatError(path.string() + ": header does not match the result schema");

  std::vector<ResultRecord> out;
  const auto cfg_cols = config_columns().size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = csv_split(line);
    if (cells.size() != header.size()) throw FormatError(path.string() + ": row has wrong column count");
    std::map<std::string, std::string> by_name;
    for (std::size_t i = 0; i < cells.size(); ++i) by_name[header[i]] = cells[i];
    ResultRecord r;
    for (std::size_t i = 0; i < cfg_cols; ++i) r.config.emplace_back(header[i], cells[i]);
    r.timer = by_name["timer"];
    r.row_kind = by_name["row_kind"];
    r.repetition = static_cast<int64_t>(parse_double(by_name["repetition"], "repetition"));
    r.elapsed_ns = parse_double(by_name["elapsed_ns"], "elapsed_ns");
    r.throughput = parse_double(by_name["throughput"], "throughput");
    r.throughput_unit = by_name["throughput_unit"];
    r.result_count = static_cast<uint64_t>(parse_double(by_name["result_count"], "result_count"));
    r.page_faults = parse_double(by_name["page_faults"], "page_faults");
    r.verified = by_name["verified"];
    for (const auto& p : phase_names()) {
      const auto& cell = by_name[phase_column(p)];
      if (!cell.empty()) r.phases_ns[p] = parse_double(cell, phase_column(p));
    }
    r.operators = by_name["operators"];
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<std::filesystem::path> data_cache_dir() {
  const char* dir = std::getenv("OLAPBENCH_DATA_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

std::vector<std::filesystem::path> generate_inputs(const BenchConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  if (config.experiment == "join") {
    const FkPair fk = generate_fk_pair(config.build_tuples, config.probe_tuples, config.seed);
    const std::string stem =
        "fk_b" + u64(config.build_tuples) + "_p" + u64(config.probe_tuples) + "_s" + u64(config.seed);
    written.push_back(dir / (stem + ".build.rel"));
    written.push_back(dir / (stem + ".probe.rel"));
    write_relation(written[0], fk.build);
    write_relation(written[1], fk.probe);
  } else if (config.experiment == "query") {
    written.push_back(dir / tpch_dir_name(config));
    tpch::write_tpch_lite(written[0], tpch::generate_tpch_lite(config.scale_factor, config.seed));
  } else {
    throw ConfigError("gen supports join (FK relations) and query (TPC-H-lite) inputs, got " + config.experiment);
  }
  return written;
}

}  // namespace olap

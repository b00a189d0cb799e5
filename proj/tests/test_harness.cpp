#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "olap/errors.hpp"
#include "olap/harness.hpp"
#include "olap/placement.hpp"

namespace fs = std::filesystem;
using namespace olap;

namespace {

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / "olap_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string joined_header() {
  std::string out;
  for (const auto& c : csv_header()) out += (out.empty() ? "" : ",") + c;
  return out;
}

BenchConfig small_join(unsigned reps = 3) {
  BenchConfig c;
  c.experiment = "join";
  c.build_tuples = 4096;
  c.probe_tuples = 16384;
  c.repetitions = reps;
  c.threads = 2;
  return c;
}

std::string config_value(const ResultRecord& r, const std::string& key) {
  for (const auto& [k, v] : r.config) {
    if (k == key) return v;
  }
  return {};
}

bool same_to_6_digits(double a, double b) { return format_float(a) == format_float(b); }

/// Minimal sysfs tree: `nodes[n]` lists (cpu, core) pairs on node n.
fs::path fake_sysfs(const std::string& name, const std::vector<std::vector<std::pair<int, int>>>& nodes) {
  const auto root = temp_dir(name);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    std::string list;
    for (const auto& [cpu, core] : nodes[n]) {
      list += (list.empty() ? "" : ",") + std::to_string(cpu);
      const auto topo = root / "devices/system/cpu" / ("cpu" + std::to_string(cpu)) / "topology";
      fs::create_directories(topo);
      std::ofstream(topo / "core_id") << core << '\n';
      std::ofstream(topo / "physical_package_id") << n << '\n';
    }
    const auto node_dir = root / "devices/system/node" / ("node" + std::to_string(n));
    fs::create_directories(node_dir);
    std::ofstream(node_dir / "cpulist") << list << '\n';
  }
  return root;
}

std::vector<int> all_cpus(const std::vector<std::vector<std::pair<int, int>>>& nodes) {
  std::vector<int> out;
  for (const auto& n : nodes) {
    for (const auto& [cpu, core] : n) out.push_back(cpu);
  }
  return out;
}

}  // namespace

TEST(Csv, HeaderMatchesGolden) {
  const std::string golden = read_file(fs::path(OLAP_GOLDEN_DIR) / "header.csv");
  EXPECT_EQ(joined_header() + "\n", golden);
}

TEST(Csv, GoldenResultsParse) {
  const auto rows = read_results_csv(fs::path(OLAP_GOLDEN_DIR) / "results_sample.csv");
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) EXPECT_EQ(r.config.size(), config_columns().size());
}

TEST(Csv, EmptyRecordsGiveHeaderOnly) {
  std::ostringstream out;
  emit_results({}, out, OutputFormat::csv);
  EXPECT_EQ(out.str(), joined_header() + "\n");
}

TEST(Csv, FloatFormatting) {
  EXPECT_EQ(format_float(1234567.0), "1.23457e+06");
  EXPECT_EQ(format_float(0.5), "0.5");
}

TEST(Stats, SampleStddev) {
  std::vector<ResultRecord> raw(4);
  const double elapsed[] = {1, 2, 3, 4};
  for (int i = 0; i < 4; ++i) {
    raw[i].elapsed_ns = elapsed[i];
    raw[i].throughput = 10.0 / elapsed[i];
    raw[i].repetition = i;
  }
  const ThroughputRule rule{ThroughputRule::Kind::per_second, 10e-9, "rows/s"};
  const auto [mean, sd] = summarize(raw, rule);
  EXPECT_DOUBLE_EQ(mean.elapsed_ns, 2.5);
  EXPECT_NEAR(sd.elapsed_ns, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_DOUBLE_EQ(mean.throughput, 4.0);
  EXPECT_EQ(mean.row_kind, "mean");
  EXPECT_EQ(sd.repetition, -1);
}

TEST(Experiment, RawRowsAndSummary) {
  const auto rows = run_experiment(small_join(10));
  ASSERT_EQ(rows.size(), 12u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(rows[i].row_kind, "raw");
    EXPECT_EQ(rows[i].repetition, i);
    EXPECT_EQ(rows[i].verified, "yes");
    EXPECT_EQ(rows[i].result_count, 16384u);
  }
  EXPECT_EQ(rows[10].row_kind, "mean");
  EXPECT_EQ(rows[11].row_kind, "stddev");
  for (const char* p : {"hist1", "copy1", "hist2", "copy2", "build", "probe"}) EXPECT_TRUE(rows[0].phases_ns.count(p));
}

TEST(Experiment, CsvStatisticsRecomputable) {
  const auto dir = temp_dir("stats");
  emit_results(run_experiment(small_join(10)), dir / "r.csv", OutputFormat::csv);
  const auto rows = read_results_csv(dir / "r.csv");
  std::vector<double> xs;
  for (const auto& r : rows) {
    if (r.row_kind == "raw") xs.push_back(r.elapsed_ns);
  }
  ASSERT_EQ(xs.size(), 10u);
  double m = 0;
  for (double x : xs) m += x;
  m /= 10;
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  s = std::sqrt(s / 9);
  EXPECT_TRUE(same_to_6_digits(rows[10].elapsed_ns, m));
  EXPECT_TRUE(same_to_6_digits(rows[11].elapsed_ns, s));
  const double expect_thr = (4096.0 + 16384.0) / (rows[10].elapsed_ns * 1e-9);
  EXPECT_NEAR(rows[10].throughput, expect_thr, expect_thr * 1e-3);
}

TEST(Experiment, ConfigEchoComplete) {
  const auto cols = config_columns();
  for (const auto& r : run_experiment(small_join(2))) {
    ASSERT_EQ(r.config.size(), cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
      EXPECT_EQ(r.config[i].first, cols[i]);
      EXPECT_FALSE(r.config[i].second.empty()) << cols[i];
    }
    EXPECT_FALSE(r.timer.empty());
  }
}

TEST(Experiment, ResolvedRadixBitsEchoed) {
  const auto rows = run_experiment(small_join(1));
  EXPECT_NE(config_value(rows[0], "radix_bits1"), "0");
}

TEST(Experiment, JsonRoundTrip) {
  const auto dir = temp_dir("json");
  auto c = small_join(3);
  c.algo = JoinAlgorithm::crk;
  const auto rows = run_experiment(c);
  emit_results(rows, dir / "r.json", OutputFormat::json);
  EXPECT_EQ(read_results_json(dir / "r.json"), rows);
}

TEST(Experiment, AllocationModes) {
  auto c = small_join(3);
  c.build_tuples = 1 << 16;
  c.probe_tuples = 1 << 20;
  c.materialize = true;
  c.alloc = AllocMode::prealloc_touch;
  const auto pre = run_experiment(c);
  c.alloc = AllocMode::lazy;
  const auto lazy = run_experiment(c);
  EXPECT_EQ(pre[0].result_count, lazy[0].result_count);
  EXPECT_EQ(lazy[0].verified, "yes");
  EXPECT_GT(lazy[3].page_faults, pre[3].page_faults);
}

TEST(Experiment, OtherExperiments) {
  BenchConfig scan;
  scan.experiment = "scan";
  scan.column_bytes = 1 << 20;
  scan.repetitions = 2;
  scan.threads = 3;
  for (const char* out : {"bitvector", "indexes"}) {
    scan.scan_output = out;
    const auto rows = run_experiment(scan);
    EXPECT_EQ(rows[0].verified, "yes");
    EXPECT_EQ(rows[0].throughput_unit, "GB/s");
  }

  BenchConfig micro;
  micro.experiment = "micro";
  micro.repetitions = 2;
  micro.array_bytes = 1 << 16;
  micro.ops = 20000;
  micro.min_duration_ns = 5'000'000;
  micro.build_tuples = 50000;
  for (const char* kind : {"chase", "randwrite", "read", "write", "queue", "hist"}) {
    micro.micro = kind;
    const auto rows = run_experiment(micro);
    ASSERT_EQ(rows.size(), 4u) << kind;
    EXPECT_NE(rows[0].verified, "no") << kind;
    EXPECT_GT(rows[2].throughput, 0.0) << kind;
  }

  BenchConfig query;
  query.experiment = "query";
  query.query = 12;
  query.scale_factor = 0.001;
  query.repetitions = 2;
  const auto rows = run_experiment(query);
  EXPECT_EQ(rows[0].verified, "yes");
  EXPECT_FALSE(rows[0].operators.empty());
  EXPECT_FALSE(rows[2].operators.empty());
}

TEST(Experiment, InvalidConfig) {
  BenchConfig c = small_join(1);
  c.experiment = "sort";
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = small_join(1);
  c.repetitions = 0;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = small_join(1);
  c.micro = "tlb";
  c.experiment = "micro";
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Experiment, DataCacheReused) {
  const auto dir = temp_dir("cache");
  setenv("OLAPBENCH_DATA_DIR", dir.c_str(), 1);
  const auto first = run_experiment(small_join(1));
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  const auto second = run_experiment(small_join(1));
  unsetenv("OLAPBENCH_DATA_DIR");
  EXPECT_EQ(files, 2);
  EXPECT_EQ(first[0].result_count, second[0].result_count);
}

TEST(Placement, ParseAndPrint) {
  for (auto p : {Placement::none, Placement::local, Placement::remote, Placement::interleave}) {
    EXPECT_EQ(parse_placement(to_string(p)), p);
  }
  EXPECT_THROW(parse_placement("far"), ConfigError);
}

TEST(Placement, SingleNodeTopology) {
  // Two physical cores with two hyperthreads each.
  const std::vector<std::vector<std::pair<int, int>>> nodes = {{{0, 0}, {1, 1}, {2, 0}, {3, 1}}};
  const auto topo = read_topology(fake_sysfs("one_node", nodes), all_cpus(nodes));
  EXPECT_EQ(topo.node_count, 1);
  EXPECT_EQ(topo.physical_cores(), (std::vector<int>{0, 1}));

  const auto one = plan_placement(topo, Placement::local, 1);
  EXPECT_EQ(one.cores, (std::vector<int>{0}));
  EXPECT_EQ(plan_placement(topo, Placement::local, 2).cores, (std::vector<int>{0, 1}));
  try {
    plan_placement(topo, Placement::local, 3);
    FAIL() << "expected an error";
  } catch (const UnsupportedError& e) {
    EXPECT_NE(std::string(e.what()).find("node 0 cores: 0 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(plan_placement(topo, Placement::remote, 1), UnsupportedError);
  EXPECT_THROW(plan_placement(topo, Placement::interleave, 1), UnsupportedError);
  EXPECT_TRUE(plan_placement(topo, Placement::none, 64).cores.empty());
}

TEST(Placement, TwoNodeTopology) {
  const std::vector<std::vector<std::pair<int, int>>> nodes = {{{0, 0}, {1, 1}}, {{2, 0}, {3, 1}}};
  const auto topo = read_topology(fake_sysfs("two_nodes", nodes), all_cpus(nodes));
  EXPECT_EQ(topo.node_count, 2);
  EXPECT_EQ(plan_placement(topo, Placement::local, 2).cores, (std::vector<int>{0, 1}));
  const auto remote = plan_placement(topo, Placement::remote, 2);
  EXPECT_EQ(remote.cores, (std::vector<int>{2, 3}));
  EXPECT_EQ(remote.data_node, 0);
  EXPECT_EQ(plan_placement(topo, Placement::interleave, 4).cores, (std::vector<int>{0, 2, 1, 3}));
  EXPECT_THROW(plan_placement(topo, Placement::remote, 3), UnsupportedError);
}

TEST(Placement, LiveHost) {
  const auto topo = read_topology();
  ASSERT_FALSE(topo.cpus.empty());
  const auto report = pin_threads(Placement::local, 1);
  EXPECT_EQ(report.cores.size(), 1u);
  pin_threads(Placement::none, 1);
  const auto too_many = static_cast<unsigned>(topo.physical_cores().size() + 1);
  EXPECT_THROW(pin_threads(Placement::local, too_many), UnsupportedError);
  if (topo.node_count < 2) {
    auto c = small_join(1);
    c.placement = Placement::remote;
    EXPECT_THROW(run_experiment(c), UnsupportedError);
  }
}

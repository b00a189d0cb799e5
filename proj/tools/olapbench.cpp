// olapbench: command-line driver for the join, scan, micro-benchmark and query experiments.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "olap/errors.hpp"
#include "olap/harness.hpp"
#include "olap/timer.hpp"

namespace {

struct CliState {
  olap::BenchConfig config;
  std::string algo = "rho";
  std::string kernel = "naive";
  std::string queue = "lockfree";
  std::string alloc = "prealloc";
  std::string placement = "none";
  std::string radix_bits;
  std::string width = "64";
  std::string format = "csv";
  std::string out;
  std::string gen_dir;
  double build_mb = 25;
  double probe_mb = 100;
  double array_mb = 64;
  double column_mb = 64;
  bool materialize = false;
  std::optional<bool> verify;
};

void add_common(CLI::App* cmd, CliState& s) {
  cmd->add_option("--threads", s.config.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--reps", s.config.repetitions, "Repetitions")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", s.config.seed, "PRNG seed");
  cmd->add_option("--kernel", s.kernel, "Radix kernel variant")->check(CLI::IsMember({"naive", "unrolled8", "simd32"}));
  cmd->add_option("--queue", s.queue, "Task queue")->check(CLI::IsMember({"lockfree", "mutex"}));
  cmd->add_option("--alloc", s.alloc, "Output allocation")->check(CLI::IsMember({"prealloc", "lazy"}));
  cmd->add_option("--placement", s.placement, "Thread/data placement")
      ->check(CLI::IsMember({"none", "local", "remote", "interleave"}));
  cmd->add_option("--out", s.out, "Output file (default: stdout)");
  cmd->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--verify,!--no-verify", s.verify, "Check results after timing (default: on up to 1 GB)");
}

void add_join_inputs(CLI::App* cmd, CliState& s) {
  cmd->add_option("--build-mb", s.build_mb, "Build relation size in MiB")->check(CLI::NonNegativeNumber);
  cmd->add_option("--probe-mb", s.probe_mb, "Probe relation size in MiB")->check(CLI::NonNegativeNumber);
  cmd->add_option("--radix-bits", s.radix_bits, "Radix bits per pass as b1,b2 (default: derived from |R|)");
}

std::pair<unsigned, unsigned> parse_bits(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw olap::ConfigError("--radix-bits expects b1,b2");
  try {
    return {static_cast<unsigned>(std::stoul(text.substr(0, comma))),
            static_cast<unsigned>(std::stoul(text.substr(comma + 1)))};
  } catch (const std::exception&) {
    throw olap::ConfigError("--radix-bits expects b1,b2, got " + text);
  }
}

void finish_config(CliState& s, const std::string& experiment) {
  auto& c = s.config;
  c.experiment = experiment;
  c.algo = olap::parse_join_algorithm(s.algo);
  c.kernel = olap::parse_kernel_variant(s.kernel);
  c.queue = olap::parse_queue_kind(s.queue);
  c.alloc = olap::parse_alloc_mode(s.alloc);
  c.placement = olap::parse_placement(s.placement);
  c.width = olap::parse_access_width(s.width);
  c.build_tuples = olap::tuples_for_megabytes(s.build_mb);
  c.probe_tuples = olap::tuples_for_megabytes(s.probe_mb);
  c.array_bytes = static_cast<uint64_t>(s.array_mb * 1024 * 1024);
  c.column_bytes = static_cast<uint64_t>(s.column_mb * 1024 * 1024);
  c.materialize = s.materialize;
  if (!s.radix_bits.empty()) std::tie(c.radix_bits1, c.radix_bits2) = parse_bits(s.radix_bits);
  if (s.verify) c.verify = *s.verify ? olap::VerifyMode::on : olap::VerifyMode::off;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"In-memory analytical operator benchmarks"};
  app.require_subcommand(1);
  CliState s;

  auto* join = app.add_subcommand("join", "Equi-join throughput on foreign-key relations");
  add_common(join, s);
  add_join_inputs(join, s);
  join->add_option("--algo", s.algo, "Join algorithm")->check(CLI::IsMember({"pht", "rho", "crk"}));
  join->add_flag("--materialize", s.materialize, "Write joined rows instead of counting");

  auto* scan = app.add_subcommand("scan", "Byte-column range scan");
  add_common(scan, s);
  scan->add_option("--selectivity", s.config.selectivity, "Fraction of matching values")->check(CLI::Range(1e-9, 1.0));
  scan->add_option("--column-mb", s.column_mb, "Column size in MiB")->check(CLI::NonNegativeNumber);
  scan->add_option("--output", s.config.scan_output, "Result form")->check(CLI::IsMember({"bitvector", "indexes"}));

  auto* micro = app.add_subcommand("micro", "Memory and synchronization micro-benchmarks");
  add_common(micro, s);
  micro->add_option("--kind", s.config.micro, "Benchmark")
      ->check(CLI::IsMember({"chase", "randwrite", "read", "write", "queue", "hist"}));
  micro->add_option("--array-mb", s.array_mb, "Array size in MiB")->check(CLI::PositiveNumber);
  micro->add_option("--width", s.width, "Access width in bits")->check(CLI::IsMember({"64", "512"}));
  micro->add_option("--ops", s.config.ops, "Chain steps, random writes or queue tasks");
  micro->add_option("--address-mask", s.config.address_mask, "Mask applied to random write slots");
  micro->add_option("--task-cost-ns", s.config.task_cost_ns, "Busy work per queue task");
  micro->add_option("--min-duration-ms", s.config.min_duration_ns, "Minimum time per linear repetition (ms)")
      ->transform([](std::string v) { return std::to_string(std::stoull(v) * 1'000'000); });
  micro->add_option("--build-mb", s.build_mb, "Relation size for hist, in MiB")->check(CLI::NonNegativeNumber);
  micro->add_option("--radix-bits", s.radix_bits, "Radix bits for hist as b1,b2 (b1 is used)");

  auto* query = app.add_subcommand("query", "TPC-H-lite query");
  add_common(query, s);
  query->add_option("--query", s.config.query, "Query number")->check(CLI::IsMember({3, 10, 12, 19}));
  query->add_option("--sf", s.config.scale_factor, "Scale factor")->check(CLI::PositiveNumber);
  query->add_option("--algo", s.algo, "Join algorithm")->check(CLI::IsMember({"pht", "rho", "crk"}));

  auto* gen = app.add_subcommand("gen", "Write generated inputs to a directory");
  std::string gen_what = "fk";
  gen->add_option("--what", gen_what, "fk relations or tpch tables")->check(CLI::IsMember({"fk", "tpch"}));
  add_join_inputs(gen, s);
  gen->add_option("--sf", s.config.scale_factor, "Scale factor")->check(CLI::PositiveNumber);
  gen->add_option("--seed", s.config.seed, "PRNG seed");
  gen->add_option("--dir", s.gen_dir, "Target directory (default: $OLAPBENCH_DATA_DIR or ./data)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) {
      finish_config(s, gen_what == "fk" ? "join" : "query");
      std::filesystem::path dir = s.gen_dir;
      if (dir.empty()) dir = olap::data_cache_dir().value_or("data");
      for (const auto& p : olap::generate_inputs(s.config, dir)) std::cout << p.string() << '\n';
      return 0;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    finish_config(s, chosen->get_name());
    if (olap::CycleClock::source() != "tsc") {
      std::cerr << "olapbench: no invariant TSC, timing with the steady clock\n";
    }
    const auto records = olap::run_experiment(s.config);
    const auto format = olap::parse_output_format(s.format);
    if (s.out.empty()) {
      olap::emit_results(records, std::cout, format);
    } else {
      olap::emit_results(records, std::filesystem::path(s.out), format);
    }
    for (const auto& r : records) {
      if (r.verified == "no") {
        std::cerr << "olapbench: verification failed\n";
        return 3;
      }
    }
  } catch (const olap::UnsupportedError& e) {
    std::cerr << "olapbench: unsupported, experiment skipped: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "olapbench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

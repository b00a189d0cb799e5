#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace olap {

/// Where worker threads run relative to the benchmark's data.
///  none:       no pinning.
///  local:      workers and data on NUMA node 0.
///  remote:     data on node 0, workers on node 1.
///  interleave: workers alternate between nodes 0 and 1.
enum class Placement { none, local, remote, interleave };

Placement parse_placement(std::string_view name);
std::string_view to_string(Placement placement);

struct CpuInfo {
  int cpu = 0;
  int package = 0;
  int core = 0;
  int node = 0;
};

struct Topology {
  std::vector<CpuInfo> cpus;  // usable logical CPUs, ascending
  int node_count = 1;

  /// One logical CPU (the lowest) per physical core on `node`, or on every node when node < 0.
  std::vector<int> physical_cores(int node = -1) const;
  std::string describe() const;
};

/// Reads CPU and NUMA topology from a sysfs tree. When `allowed` is given only those CPUs are
/// kept; otherwise the calling thread's affinity mask decides.
Topology read_topology(const std::filesystem::path& sysfs_root = "/sys",
                       std::optional<std::vector<int>> allowed = std::nullopt);

struct PlacementReport {
  Placement placement = Placement::none;
  std::vector<int> cores;  // worker i runs on cores[i]
  int data_node = 0;
  std::string describe() const;
};

/// Chooses one distinct physical core per thread. Throws UnsupportedError when the host has too
/// few physical cores or, for remote/interleave, fewer than two NUMA nodes.
PlacementReport plan_placement(const Topology& topo, Placement placement, unsigned threads);

/// plan_placement on the live topology, then pins team workers accordingly (none clears pinning).
PlacementReport pin_threads(Placement placement, unsigned threads);

/// Binds the calling thread to the CPUs of `node` (first-touch data placement). Returns false
/// when the node has no usable CPU.
bool bind_current_thread_to_node(const Topology& topo, int node);
/// Restores the calling thread's affinity to every usable CPU.
void unbind_current_thread(const Topology& topo);

}  // namespace olap

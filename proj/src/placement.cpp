#include "olap/placement.hpp"

#include <pthread.h>
#include <sched.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "olap/errors.hpp"
#include "olap/team.hpp"

namespace olap {

Placement parse_placement(std::string_view name) {
  if (name == "none") return Placement::none;
  if (name == "local") return Placement::local;
  if (name == "remote") return Placement::remote;
  if (name == "interleave") return Placement::interleave;
  throw ConfigError("unknown placement: " + std::string(name));
}

std::string_view to_string(Placement placement) {
  switch (placement) {
    case Placement::none:
      return "none";
    case Placement::local:
      return "local";
    case Placement::remote:
      return "remote";
    case Placement::interleave:
      return "interleave";
  }
  return "?";
}

namespace {

std::optional<int> read_int(const std::filesystem::path& p) {
  std::ifstream in(p);
  int v;
  if (in >> v) return v;
  return std::nullopt;
}

/// Parses "0-3,8,10-11".
std::vector<int> parse_cpu_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item == "\n") continue;
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dash));
        const int hi = std::stoi(item.substr(dash + 1));
        for (int c = lo; c <= hi; ++c) out.push_back(c);
      }
    } catch (const std::exception&) {
      throw FormatError("bad cpu list: " + text);
    }
  }
  return out;
}

std::vector<int> affinity_cpus() {
  std::vector<int> out;
  cpu_set_t set;
  if (sched_getaffinity(0, sizeof(set), &set) != 0) return out;
  for (int c = 0; c < CPU_SETSIZE; ++c) {
    if (CPU_ISSET(c, &set)) out.push_back(c);
  }
  return out;
}

void set_current_affinity(const std::vector<int>& cpus) {
  cpu_set_t set;
  CPU_ZERO(&set);
  for (int c : cpus) CPU_SET(c, &set);
  pthread_setaffinity_np(pthread_self(), sizeof(set), &set);
}

}  // namespace

Topology read_topology(const std::filesystem::path& sysfs_root, std::optional<std::vector<int>> allowed) {
  const auto cpu_dir = sysfs_root / "devices/system/cpu";
  const auto node_dir = sysfs_root / "devices/system/node";
  std::vector<int> usable = allowed ? *allowed : affinity_cpus();

  std::map<int, int> node_of;
  int nodes = 0;
  if (std::filesystem::exists(node_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(node_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("node", 0) != 0 || name.size() == 4 ||
          !std::all_of(name.begin() + 4, name.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
        continue;
      }
      const int node = std::stoi(name.substr(4));
      std::ifstream in(entry.path() / "cpulist");
      std::string list;
      std::getline(in, list);
      for (int c : parse_cpu_list(list)) node_of[c] = node;
      ++nodes;
    }
  }

  Topology topo;
  topo.node_count = std::max(nodes, 1);
  std::sort(usable.begin(), usable.end());
  for (int c : usable) {
    const auto base = cpu_dir / ("cpu" + std::to_string(c)) / "topology";
    CpuInfo info;
    info.cpu = c;
    info.package = read_int(base / "physical_package_id").value_or(0);
    info.core = read_int(base / "core_id").value_or(c);
    info.node = node_of.count(c) != 0 ? node_of[c] : 0;
    topo.cpus.push_back(info);
  }
  return topo;
}

std::vector<int> Topology::physical_cores(int node) const {
  std::set<std::pair<int, int>> seen;
  std::vector<int> out;
  for (const auto& c : cpus) {
    if (node >= 0 && c.node != node) continue;
    if (seen.insert({c.package, c.core}).second) out.push_back(c.cpu);
  }
  return out;
}

std::string Topology::describe() const {
  std::ostringstream os;
  os << node_count << " NUMA node(s), " << physical_cores().size() << " physical core(s), " << cpus.size()
     << " logical CPU(s)";
  for (int n = 0; n < node_count; ++n) {
    os << "; node " << n << " cores:";
    for (int c : physical_cores(n)) os << ' ' << c;
  }
  return os.str();
}

std::string PlacementReport::describe() const {
  std::ostringstream os;
  os << to_string(placement) << " data_node=" << data_node << " cores=";
  for (std::size_t i = 0; i < cores.size(); ++i) os << (i ? "," : "") << cores[i];
  return os.str();
}

PlacementReport plan_placement(const Topology& topo, Placement placement, unsigned threads) {
  PlacementReport report;
  report.placement = placement;
  if (placement == Placement::none) return report;
  if (threads == 0) throw ConfigError("threads must be at least 1");

  if ((placement == Placement::remote || placement == Placement::interleave) && topo.node_count < 2) {
    throw UnsupportedError(std::string(to_string(placement)) + " placement needs at least two NUMA nodes; host has " +
                           topo.describe());
  }

  std::vector<int> pool;
  switch (placement) {
    case Placement::local:
      pool = topo.physical_cores(0);
      break;
    case Placement::remote:
      pool = topo.physical_cores(1);
      break;
    case Placement::interleave: {
      const auto a = topo.physical_cores(0);
      const auto b = topo.physical_cores(1);
      for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        if (i < a.size()) pool.push_back(a[i]);
        if (i < b.size()) pool.push_back(b[i]);
      }
      break;
    }
    case Placement::none:
      break;
  }
  if (threads > pool.size()) {
    throw UnsupportedError(std::to_string(threads) + " threads requested but only " + std::to_string(pool.size()) +
                           " physical core(s) available for " + std::string(to_string(placement)) +
                           " placement; topology: " + topo.describe());
  }
  report.cores.assign(pool.begin(), pool.begin() + threads);
  report.data_node = 0;
  return report;
}

PlacementReport pin_threads(Placement placement, unsigned threads) {
  const Topology topo = read_topology();
  PlacementReport report = plan_placement(topo, placement, threads);
  set_worker_cpus(report.cores);
  return report;
}

bool bind_current_thread_to_node(const Topology& topo, int node) {
  std::vector<int> cpus;
  for (const auto& c : topo.cpus) {
    if (c.node == node) cpus.push_back(c.cpu);
  }
  if (cpus.empty()) return false;
  set_current_affinity(cpus);
  return true;
}

void unbind_current_thread(const Topology& topo) {
  std::vector<int> cpus;
  for (const auto& c : topo.cpus) cpus.push_back(c.cpu);
  if (!cpus.empty()) set_current_affinity(cpus);
}

}  // namespace olap

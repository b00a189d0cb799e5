#pragma once

#include <functional>
#include <vector>

namespace olap {

/// Runs `body(tid)` on `threads` workers; worker 0 is the calling thread.
/// Rethrows the first worker exception after all workers have joined.
void run_team(unsigned threads, const std::function<void(unsigned)>& body);

/// CPUs that team workers are pinned to (worker i -> cpus[i % size]); empty disables pinning.
void set_worker_cpus(std::vector<int> cpus);
std::vector<int> worker_cpus();

/// Contiguous [begin, end) share of `n` items for worker `tid` of `threads`, boundaries rounded to `align`.
struct ChunkRange {
  std::size_t begin;
  std::size_t end;
};
ChunkRange chunk_for(std::size_t n, unsigned tid, unsigned threads, std::size_t align = 1);

}  // namespace olap

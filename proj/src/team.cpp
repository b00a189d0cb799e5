#include "olap/team.hpp"

#include <pthread.h>
#include <sched.h>

#include <exception>
#include <mutex>
#include <thread>

namespace olap {

namespace {

std::mutex g_cpu_mutex;
std::vector<int> g_cpus;

void pin_current(int cpu) {
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  pthread_setaffinity_np(pthread_self(), sizeof(set), &set);
}

}  // namespace

void set_worker_cpus(std::vector<int> cpus) {
  std::lock_guard lock(g_cpu_mutex);
  g_cpus = std::move(cpus);
}

std::vector<int> worker_cpus() {
  std::lock_guard lock(g_cpu_mutex);
  return g_cpus;
}

void run_team(unsigned threads, const std::function<void(unsigned)>& body) {
  if (threads == 0) threads = 1;
  const std::vector<int> cpus = worker_cpus();

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto guarded = [&](unsigned tid) {
    try {
      body(tid);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> workers;
  workers.reserve(threads - 1);
  for (unsigned tid = 1; tid < threads; ++tid) {
    workers.emplace_back([&, tid] {
      if (!cpus.empty()) pin_current(cpus[tid % cpus.size()]);
      guarded(tid);
    });
  }

  cpu_set_t saved;
  const bool restore = !cpus.empty() && pthread_getaffinity_np(pthread_self(), sizeof(saved), &saved) == 0;
  if (!cpus.empty()) pin_current(cpus[0]);
  guarded(0);
  if (restore) pthread_setaffinity_np(pthread_self(), sizeof(saved), &saved);

  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

ChunkRange chunk_for(std::size_t n, unsigned tid, unsigned threads, std::size_t align) {
  const std::size_t units = (n + align - 1) / align;
  const std::size_t per = units / threads;
  const std::size_t extra = units % threads;
  const std::size_t first = tid * per + std::min<std::size_t>(tid, extra);
  const std::size_t count = per + (tid < extra ? 1 : 0);
  const std::size_t begin = std::min(n, first * align);
  const std::size_t end = std::min(n, (first + count) * align);
  return {begin, end};
}

}  // namespace olap

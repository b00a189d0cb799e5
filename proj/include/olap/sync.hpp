#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <condition_variable>
#include <optional>
#include <string_view>
#include <vector>

#include "olap/bench_result.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

namespace olap {

inline void cpu_relax() {
#if defined(__x86_64__) || defined(__i386__)
  _mm_pause();
#endif
}

enum class TaskKind : uint8_t { partition, build_probe, crack };

/// Unit of work handed out by a TaskQueue. Joins use `partition` as the pass-1 partition id
/// and `[begin, end)` for tuple ranges; `side` selects build (0) or probe (1).
struct Task {
  TaskKind kind = TaskKind::partition;
  uint8_t side = 0;
  uint16_t level = 0;
  uint32_t partition = 0;
  uint64_t begin = 0;
  uint64_t end = 0;

  friend bool operator==(const Task&, const Task&) = default;
};

enum class QueueKind { lockfree, mutex };

QueueKind parse_queue_kind(std::string_view name);
std::string_view to_string(QueueKind kind);

struct QueueStats {
  /// lock-free: failed CAS attempts; mutex: acquisitions that found the lock held.
  uint64_t contended = 0;
};

/// Bounded multi-producer/multi-consumer task queue.
class TaskQueue {
 public:
  virtual ~TaskQueue() = default;
  /// False only when the queue is full; the queue is unchanged in that case.
  virtual bool push(const Task& task) = 0;
  /// Never waits for a task to arrive; nullopt when empty.
  virtual std::optional<Task> pop() = 0;
  /// Waits until a task is available or the queue is closed and drained.
  virtual std::optional<Task> wait_pop() = 0;
  virtual void close() = 0;
  virtual std::size_t capacity() const = 0;
  virtual QueueStats stats() const = 0;
};

/// Bounded ring with per-slot sequence numbers (Vyukov). Capacity is rounded up to a power of two.
/// No path takes a lock or makes a blocking system call.
class LockFreeTaskQueue final : public TaskQueue {
 public:
  explicit LockFreeTaskQueue(std::size_t capacity);

  bool push(const Task& task) override;
  std::optional<Task> pop() override;
  std::optional<Task> wait_pop() override;
  void close() override { closed_.store(true, std::memory_order_release); }
  std::size_t capacity() const override { return mask_ + 1; }
  QueueStats stats() const override { return {contended_.load(std::memory_order_relaxed)}; }

 private:
  struct alignas(64) Slot {
    std::atomic<std::size_t> sequence;
    Task task;
  };

  std::unique_ptr<Slot[]> slots_;
  std::size_t mask_;
  alignas(64) std::atomic<std::size_t> enqueue_pos_{0};
  alignas(64) std::atomic<std::size_t> dequeue_pos_{0};
  alignas(64) std::atomic<uint64_t> contended_{0};
  std::atomic<bool> closed_{false};
};

/// Ring guarded by std::mutex; wait_pop sleeps on a condition variable.
class MutexTaskQueue final : public TaskQueue {
 public:
  explicit MutexTaskQueue(std::size_t capacity);

  bool push(const Task& task) override;
  std::optional<Task> pop() override;
  std::optional<Task> wait_pop() override;
  void close() override;
  std::size_t capacity() const override { return ring_.size(); }
  QueueStats stats() const override { return {contended_.load(std::memory_order_relaxed)}; }

 private:
  std::unique_lock<std::mutex> acquire();

  std::mutex mutex_;
  std::condition_variable not_empty_;
  std::vector<Task> ring_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  bool closed_ = false;
  std::atomic<uint64_t> contended_{0};
};

std::unique_ptr<TaskQueue> make_task_queue(QueueKind kind, std::size_t capacity);

/// Test-and-test-and-set spin latch. Yields after a bounded spin so oversubscribed runs progress.
class SpinLatch {
 public:
  void lock() {
    for (;;) {
      if (!flag_.exchange(true, std::memory_order_acquire)) return;
      unsigned spins = 0;
      while (flag_.load(std::memory_order_relaxed)) {
        if (++spins < 1024) {
          cpu_relax();
        } else {
          yield();
          spins = 0;
        }
      }
    }
  }
  bool try_lock() { return !flag_.load(std::memory_order_relaxed) && !flag_.exchange(true, std::memory_order_acquire); }
  void unlock() { flag_.store(false, std::memory_order_release); }

 private:
  static void yield();
  std::atomic<bool> flag_{false};
};

struct ContentionResult {
  MicrobenchResult metrics;  // ops_per_s = tasks/s
  uint64_t consumed = 0;
  uint64_t duplicates = 0;
  uint64_t missing = 0;
  QueueStats queue_stats;
};

/// Pre-fills a queue with `tasks` tasks, then `threads` workers drain it, each task
/// costing about `task_cost_ns` of spinning. Exactly-once is checked with a per-task flag array.
ContentionResult contention_bench(QueueKind kind, unsigned threads, uint64_t tasks, uint64_t task_cost_ns);

}  // namespace olap

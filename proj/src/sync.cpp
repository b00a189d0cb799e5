#include "olap/sync.hpp"

#include <bit>
#include <thread>

#include "olap/errors.hpp"
#include "olap/team.hpp"
#include "olap/timer.hpp"

namespace olap {

QueueKind parse_queue_kind(std::string_view name) {
  if (name == "lockfree") return QueueKind::lockfree;
  if (name == "mutex") return QueueKind::mutex;
  throw ConfigError("unknown queue kind: " + std::string(name));
}

std::string_view to_string(QueueKind kind) { return kind == QueueKind::lockfree ? "lockfree" : "mutex"; }

void SpinLatch::yield() { std::this_thread::yield(); }

LockFreeTaskQueue::LockFreeTaskQueue(std::size_t capacity) {
  const std::size_t cap = std::bit_ceil(std::max<std::size_t>(capacity, 2));
  slots_ = std::make_unique<Slot[]>(cap);
  for (std::size_t i = 0; i < cap; ++i) slots_[i].sequence.store(i, std::memory_order_relaxed);
  mask_ = cap - 1;
}

bool LockFreeTaskQueue::push(const Task& task) {
  std::size_t pos = enqueue_pos_.load(std::memory_order_relaxed);
  for (;;) {
    Slot& slot = slots_[pos & mask_];
    const std::size_t seq = slot.sequence.load(std::memory_order_acquire);
    const auto diff = static_cast<std::intptr_t>(seq) - static_cast<std::intptr_t>(pos);
    if (diff == 0) {
      if (enqueue_pos_.compare_exchange_weak(pos, pos + 1, std::memory_order_relaxed)) {
        slot.task = task;
        slot.sequence.store(pos + 1, std::memory_order_release);
        return true;
      }
      contended_.fetch_add(1, std::memory_order_relaxed);
    } else if (diff < 0) {
      return false;
    } else {
      pos = enqueue_pos_.load(std::memory_order_relaxed);
    }
  }
}

std::optional<Task> LockFreeTaskQueue::pop() {
  std::size_t pos = dequeue_pos_.load(std::memory_order_relaxed);
  for (;;) {
    Slot& slot = slots_[pos & mask_];
    const std::size_t seq = slot.sequence.load(std::memory_order_acquire);
    const auto diff = static_cast<std::intptr_t>(seq) - static_cast<std::intptr_t>(pos + 1);
    if (diff == 0) {
      if (dequeue_pos_.compare_exchange_weak(pos, pos + 1, std::memory_order_relaxed)) {
        Task task = slot.task;
        slot.sequence.store(pos + mask_ + 1, std::memory_order_release);
        return task;
      }
      contended_.fetch_add(1, std::memory_order_relaxed);
    } else if (diff < 0) {
      return std::nullopt;
    } else {
      pos = dequeue_pos_.load(std::memory_order_relaxed);
    }
  }
}

std::optional<Task> LockFreeTaskQueue::wait_pop() {
  unsigned spins = 0;
  for (;;) {
    if (auto task = pop()) return task;
    if (closed_.load(std::memory_order_acquire)) return pop();
    if (++spins < 256) {
      cpu_relax();
    } else {
      std::this_thread::yield();
      spins = 0;
    }
  }
}

MutexTaskQueue::MutexTaskQueue(std::size_t capacity) : ring_(std::max<std::size_t>(capacity, 1)) {}

std::unique_lock<std::mutex> MutexTaskQueue::acquire() {
  std::unique_lock lock(mutex_, std::try_to_lock);
  if (!lock.owns_lock()) {
    contended_.fetch_add(1, std::memory_order_relaxed);
    lock.lock();
  }
  return lock;
}

bool MutexTaskQueue::push(const Task& task) {
  {
    auto lock = acquire();
    if (count_ == ring_.size()) return false;
    ring_[(head_ + count_) % ring_.size()] = task;
    ++count_;
  }
  not_empty_.notify_one();
  return true;
}

std::optional<Task> MutexTaskQueue::pop() {
  auto lock = acquire();
  if (count_ == 0) return std::nullopt;
  Task task = ring_[head_];
  head_ = (head_ + 1) % ring_.size();
  --count_;
  return task;
}

std::optional<Task> MutexTaskQueue::wait_pop() {
  auto lock = acquire();
  not_empty_.wait(lock, [&] { return count_ != 0 || closed_; });
  if (count_ == 0) return std::nullopt;
  Task task = ring_[head_];
  head_ = (head_ + 1) % ring_.size();
  --count_;
  return task;
}

void MutexTaskQueue::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  not_empty_.notify_all();
}

std::unique_ptr<TaskQueue> make_task_queue(QueueKind kind, std::size_t capacity) {
  if (kind == QueueKind::lockfree) return std::make_unique<LockFreeTaskQueue>(capacity);
  return std::make_unique<MutexTaskQueue>(capacity);
}

ContentionResult contention_bench(QueueKind kind, unsigned threads, uint64_t tasks, uint64_t task_cost_ns) {
  if (threads == 0) throw ConfigError("contention_bench needs at least one thread");
  if (tasks < threads) throw ConfigError("contention_bench needs at least as many tasks as threads");

  auto queue = make_task_queue(kind, tasks);
  for (uint64_t i = 0; i < tasks; ++i) {
    Task t;
    t.kind = TaskKind::build_probe;
    t.begin = i;
    t.end = i + 1;
    queue->push(t);
  }
  std::vector<std::atomic<uint8_t>> seen(tasks);
  std::atomic<uint64_t> duplicates{0};
  std::atomic<uint64_t> consumed{0};
  const uint64_t cost_ticks =
      task_cost_ns == 0 ? 0 : static_cast<uint64_t>(static_cast<double>(task_cost_ns) / CycleClock::ns_per_tick());

  Stopwatch watch;
  run_team(threads, [&](unsigned) {
    uint64_t local = 0;
    while (auto task = queue->pop()) {
      if (seen[task->begin].exchange(1, std::memory_order_relaxed) != 0) {
        duplicates.fetch_add(1, std::memory_order_relaxed);
      }
      if (cost_ticks != 0) {
        const uint64_t start = CycleClock::now();
        while (CycleClock::now() - start < cost_ticks) cpu_relax();
      }
      ++local;
    }
    consumed.fetch_add(local, std::memory_order_relaxed);
  });
  const uint64_t elapsed = watch.elapsed_ns();

  ContentionResult result;
  result.consumed = consumed.load();
  result.duplicates = duplicates.load();
  for (auto& flag : seen) result.missing += flag.load(std::memory_order_relaxed) == 0 ? 1 : 0;
  result.queue_stats = queue->stats();
  result.metrics.unit = MicrobenchResult::Unit::ops_per_s;
  result.metrics.op_count = result.consumed;
  result.metrics.elapsed_ns = elapsed;
  result.metrics.bytes_touched = result.consumed * sizeof(Task);
  result.metrics.checksum = result.consumed;
  result.metrics.finalize();
  return result;
}

}  // namespace olap

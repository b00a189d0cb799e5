#pragma once

#include <cstdint>
#include <string_view>

namespace olap {

/// Serialized timestamp counter with a one-time calibration against the steady clock.
/// Falls back to the steady clock where no invariant TSC is available; `source()` says which.
class CycleClock {
 public:
  static uint64_t now();
  static double ns_per_tick();
  static uint64_t to_ns(uint64_t ticks);
  /// "tsc" or "wall".
  static std::string_view source();
};

class Stopwatch {
 public:
  Stopwatch() : start_(CycleClock::now()) {}
  void restart() { start_ = CycleClock::now(); }
  uint64_t elapsed_ticks() const { return CycleClock::now() - start_; }
  uint64_t elapsed_ns() const { return CycleClock::to_ns(elapsed_ticks()); }

 private:
  uint64_t start_;
};

}  // namespace olap

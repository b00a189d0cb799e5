#include "olap/timer.hpp"

#include <chrono>
#include <fstream>
#include <string>

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define OLAP_HAVE_TSC 1
#endif

namespace olap {

namespace {

uint64_t steady_ns() {
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                   std::chrono::steady_clock::now().time_since_epoch())
                                   .count());
}

bool detect_invariant_tsc() {
#ifdef OLAP_HAVE_TSC
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("flags", 0) == 0) {
      return line.find(" constant_tsc") != std::string::npos && line.find(" rdtscp") != std::string::npos;
    }
  }
#endif
  return false;
}

uint64_t read_tsc() {
#ifdef OLAP_HAVE_TSC
  unsigned aux;
  const uint64_t t = __rdtscp(&aux);
  _mm_lfence();
  return t;
#else
  return steady_ns();
#endif
}

struct Calibration {
  bool tsc;
  double ns_per_tick;
};

const Calibration& calibration() {
  static const Calibration cal = [] {
    if (!detect_invariant_tsc()) return Calibration{false, 1.0};
    const uint64_t w0 = steady_ns();
    const uint64_t t0 = read_tsc();
    while (steady_ns() - w0 < 20'000'000) {
    }
    const uint64_t w1 = steady_ns();
    const uint64_t t1 = read_tsc();
    return Calibration{true, static_cast<double>(w1 - w0) / static_cast<double>(t1 - t0)};
  }();
  return cal;
}

}  // namespace

uint64_t CycleClock::now() { return calibration().tsc ? read_tsc() : steady_ns(); }

double CycleClock::ns_per_tick() { return calibration().ns_per_tick; }

uint64_t CycleClock::to_ns(uint64_t ticks) {
  return static_cast<uint64_t>(static_cast<double>(ticks) * calibration().ns_per_tick + 0.5);
}

std::string_view CycleClock::source() { return calibration().tsc ? "tsc" : "wall"; }

}  // namespace olap

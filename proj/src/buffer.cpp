#include "olap/buffer.hpp"

#include <sys/mman.h>
#include <sys/resource.h>
#include <unistd.h>

#include <new>

namespace olap {
namespace detail {

namespace {
std::size_t page_size() {
  static const std::size_t size = static_cast<std::size_t>(sysconf(_SC_PAGESIZE));
  return size;
}
}  // namespace

void* map_pages(std::size_t bytes) {
  void* p = mmap(nullptr, bytes, PROT_READ | PROT_WRITE, MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
  if (p == MAP_FAILED) throw std::bad_alloc();
  return p;
}

void unmap_pages(void* p, std::size_t bytes) { munmap(p, bytes); }

void touch_pages(void* p, std::size_t bytes) {
  auto* bytes_ptr = static_cast<volatile unsigned char*>(p);
  const std::size_t step = page_size();
  for (std::size_t off = 0; off < bytes; off += step) bytes_ptr[off] = 0;
}

}  // namespace detail

uint64_t minor_page_faults() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
  return static_cast<uint64_t>(usage.ru_minflt);
}

}  // namespace olap

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <type_traits>
#include <utility>

namespace olap {

/// How output memory is provisioned before a timed region.
///  prealloc_touch: mapped and every page written once (no first-touch faults later).
///  lazy: mapped only; pages fault in on first write inside the timed region.
enum class AllocMode { prealloc_touch, lazy };

namespace detail {
void* map_pages(std::size_t bytes);
void unmap_pages(void* p, std::size_t bytes);
void touch_pages(void* p, std::size_t bytes);
}  // namespace detail

/// Page-aligned, uninitialized-by-contract array of trivially copyable T.
/// Backed by an anonymous mapping so lazy buffers stay untouched until written.
template <typename T>
class AlignedBuffer {
  static_assert(std::is_trivially_copyable_v<T>);

 public:
  AlignedBuffer() = default;
  explicit AlignedBuffer(std::size_t n, AllocMode mode = AllocMode::prealloc_touch) { allocate(n, mode); }
  ~AlignedBuffer() { release(); }

  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  AlignedBuffer(AlignedBuffer&& o) noexcept
      : data_(std::exchange(o.data_, nullptr)), size_(std::exchange(o.size_, 0)) {}
  AlignedBuffer& operator=(AlignedBuffer&& o) noexcept {
    if (this != &o) {
      release();
      data_ = std::exchange(o.data_, nullptr);
      size_ = std::exchange(o.size_, 0);
    }
    return *this;
  }

  void allocate(std::size_t n, AllocMode mode) {
    release();
    if (n == 0) return;
    data_ = static_cast<T*>(detail::map_pages(n * sizeof(T)));
    size_ = n;
    if (mode == AllocMode::prealloc_touch) detail::touch_pages(data_, n * sizeof(T));
  }

  AlignedBuffer clone() const {
    AlignedBuffer copy(size_, AllocMode::lazy);
    if (size_ != 0) std::memcpy(copy.data_, data_, size_ * sizeof(T));
    return copy;
  }

  T* data() { return data_; }
  const T* data() const { return data_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T* begin() { return data_; }
  T* end() { return data_ + size_; }
  const T* begin() const { return data_; }
  const T* end() const { return data_ + size_; }
  std::span<T> span() { return {data_, size_}; }
  std::span<const T> span() const { return {data_, size_}; }

 private:
  void release() {
    if (data_ != nullptr) detail::unmap_pages(data_, size_ * sizeof(T));
    data_ = nullptr;
    size_ = 0;
  }

  T* data_ = nullptr;
  std::size_t size_ = 0;
};

/// Minor page faults of this process so far (0 where the OS does not report them).
uint64_t minor_page_faults();

}  // namespace olap

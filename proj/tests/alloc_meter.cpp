#include "alloc_meter.hpp"

#include <cstdlib>
#include <malloc.h>
#include <new>

namespace allocmeter {

std::atomic<long long> live_bytes{0};
std::atomic<long long> peak_bytes{0};

namespace {

void track(void* p) {
  if (p == nullptr) return;
  long long sz = static_cast<long long>(malloc_usable_size(p));
  long long now = live_bytes.fetch_add(sz) + sz;
  long long peak = peak_bytes.load();
  while (now > peak && !peak_bytes.compare_exchange_weak(peak, now)) {
  }
}

void untrack(void* p) {
  if (p == nullptr) return;
  live_bytes.fetch_sub(static_cast<long long>(malloc_usable_size(p)));
}

void* checked_alloc(std::size_t size) {
  void* p = std::malloc(size);
  if (p == nullptr) throw std::bad_alloc();
  track(p);
  return p;
}

}  // namespace
}  // namespace allocmeter

// Aligned overloads are deliberately left to the default implementation;
// aligned news pair with aligned deletes, so the accounting stays consistent.
void* operator new(std::size_t size) { return allocmeter::checked_alloc(size); }
void* operator new[](std::size_t size) { return allocmeter::checked_alloc(size); }

void* operator new(std::size_t size, const std::nothrow_t&) noexcept {
  void* p = std::malloc(size);
  allocmeter::track(p);
  return p;
}
void* operator new[](std::size_t size, const std::nothrow_t&) noexcept {
  void* p = std::malloc(size);
  allocmeter::track(p);
  return p;
}

void operator delete(void* p) noexcept {
  allocmeter::untrack(p);
  std::free(p);
}
void operator delete[](void* p) noexcept {
  allocmeter::untrack(p);
  std::free(p);
}
void operator delete(void* p, std::size_t) noexcept {
  allocmeter::untrack(p);
  std::free(p);
}
void operator delete[](void* p, std::size_t) noexcept {
  allocmeter::untrack(p);
  std::free(p);
}
void operator delete(void* p, const std::nothrow_t&) noexcept {
  allocmeter::untrack(p);
  std::free(p);
}
void operator delete[](void* p, const std::nothrow_t&) noexcept {
  allocmeter::untrack(p);
  std::free(p);
}

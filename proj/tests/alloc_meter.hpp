#pragma once

#include <atomic>
#include <cstddef>

// Live-byte accounting for the whole test binary, fed by the global
// (unaligned) operator new/delete overrides in alloc_meter.cpp. Used to show
// that streaming decode keeps peak memory independent of input size.
namespace allocmeter {

extern std::atomic<long long> live_bytes;
extern std::atomic<long long> peak_bytes;

inline void reset_peak() { peak_bytes.store(live_bytes.load()); }

}  // namespace allocmeter

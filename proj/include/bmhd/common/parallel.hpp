#pragma once

#include <cstddef>
#include <functional>

namespace bmhd {

/// Worker cap: BMHD_THREADS if set and positive, else hardware concurrency.
unsigned thread_cap();

/// Runs body(i) for i in [0, n) on up to thread_cap() threads. Work is split
/// into contiguous chunks; callers write to per-index slots so the result is
/// independent of scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bmhd

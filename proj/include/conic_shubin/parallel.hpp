#pragma once

#include <cstddef>
#include <functional>

namespace conic_shubin {

/// Worker count: CONIC_SHUBIN_THREADS when set to a positive integer, else
/// the hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads.
///
/// Indices are split into fixed contiguous chunks; each index is processed
/// exactly once, so results written per index do not depend on the thread
/// count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace conic_shubin

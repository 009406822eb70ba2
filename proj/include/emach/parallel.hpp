#pragma once

#include <cstddef>
#include <functional>

namespace emach {

/// Worker count: EMTOOL_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_threads();

/// Calls body(i) for i in [0, count) on up to worker_threads() threads.
/// Indices are split into contiguous chunks; body must only write to
/// per-index storage. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace emach

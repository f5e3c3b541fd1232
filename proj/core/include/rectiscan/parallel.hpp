#pragma once

#include <cstddef>
#include <functional>

namespace rectiscan {

/// Number of worker threads: RECTISCAN_THREADS if set and positive, else
/// the hardware concurrency (at least 1).
unsigned default_thread_count();

/// Overrides the process-wide thread count (0 restores the default).
void set_thread_count(unsigned threads);

/// Runs body(i) for i in [0, count). Work items are handed out in index
/// order to a fixed pool; body must only write to slot i of its outputs, so
/// results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rectiscan

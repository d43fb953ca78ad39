#pragma once

#include <cstddef>
#include <functional>

namespace rieszlab {

// Maximum worker threads.  Defaults to the RIESZLAB_THREADS environment
// variable when set (clamped to >= 1), otherwise to the hardware concurrency.
int max_threads();

// Override the thread count for this process (0 restores the default).
void set_max_threads(int n);

// Run fn(i) for i in [0, n) on a static block partition of worker threads.
// Each index is evaluated exactly once by exactly one thread, so any
// computation whose per-index result is independent of the partition is
// deterministic regardless of the thread count.  Exceptions thrown by fn are
// captured and rethrown (first one wins) after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rieszlab

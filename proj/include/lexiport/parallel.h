#pragma once

#include <cstddef>
#include <functional>

namespace lexiport {

// Worker count: LEXIPORT_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t thread_count();

// Calls fn(begin, end) over contiguous chunks of [0, n) on up to `threads`
// threads. Chunk boundaries only affect scheduling; callers write results
// into per-index slots so output never depends on the thread count.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace lexiport

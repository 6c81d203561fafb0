#pragma once

#include <cstddef>
#include <functional>

namespace adagcn {

// Thread cap: min(ADAGCN_THREADS, hardware concurrency), at least 1.
// Read once at first use.
int max_threads();

// Runs fn(begin, end) over a partition of [0, n) into contiguous chunks,
// one chunk per worker. Each index is processed by exactly one worker, so
// results are identical for any thread count as long as fn writes only to
// its own rows. Falls back to a single serial call when n < min_parallel
// or only one thread is available.
void parallel_for(std::size_t n, std::size_t min_parallel,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace adagcn

#pragma once

#include <cstddef>
#include <functional>

namespace tcmesh {

// Resolves a requested thread count: 0 means "use hardware concurrency".
std::size_t resolve_thread_count(std::size_t requested);

// Runs fn(begin, end) over contiguous chunks of [0, n), at most `threads`
// threads. Callers must write results into pre-sized slots keyed by index so
// the outcome is identical for any thread count.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace tcmesh

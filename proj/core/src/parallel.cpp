#include "tcmesh/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace tcmesh {

std::size_t resolve_thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  threads = std::min(resolve_thread_count(threads), n);
  if (n == 0) return;
  if (threads <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(begin + chunk, n);
    if (begin >= end) break;
    workers.emplace_back(fn, begin, end);
  }
  for (auto& worker : workers) worker.join();
}

}  // namespace tcmesh

#pragma once

#include <cstddef>
#include <functional>

namespace ssdnn {

/// Number of workers for a requested degree of parallelism (0 = all cores).
unsigned resolve_threads(unsigned requested);

/// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks must
/// not share mutable state. The first exception thrown by any task is
/// rethrown after all workers have stopped.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task);

}  // namespace ssdnn

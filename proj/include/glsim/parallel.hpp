#pragma once
// Deterministic task-parallel loop. Tasks are indexed; each task writes only
// to its own slot and draws only from its own random stream, so results are
// identical for any worker count. Reductions happen afterwards in index
// order on the calling thread.

#include <cstddef>
#include <functional>

namespace glsim {

// Runs fn(0..n-1) on the given number of worker threads (<=1 means inline).
// The first exception thrown by a task is rethrown after all workers finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace glsim

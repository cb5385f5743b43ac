#pragma once

#include <cstddef>
#include <functional>

namespace le {

// Worker count: LAYERED_ELASTICA_THREADS if set, else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n). Each index is handled by exactly one thread;
// results must be written to per-index slots for deterministic output.
// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace le

#pragma once

#include <cstddef>
#include <functional>

namespace foliation {

// Hardware threads, capped by FOLIATION_LAB_THREADS when set to a positive integer.
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads; results must go to per-index slots.
// The first exception thrown by any worker is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace foliation

#pragma once

#include <cstddef>
#include <functional>

namespace spectre {

// Worker count: SPECTRE_THREADS if set to a positive integer, else the hardware count.
int thread_count();

// Calls fn(i) for i in [0, n) across worker threads. fn must only write to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace spectre

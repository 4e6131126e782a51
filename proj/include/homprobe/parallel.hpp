#pragma once

#include <cstddef>
#include <functional>

namespace homprobe {

// Worker count: hardware concurrency, capped by HOMPROBE_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
// write results into per-index slots so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace homprobe

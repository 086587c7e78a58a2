#pragma once

#include <cstddef>
#include <functional>

namespace optdesign {

/// Worker count: OPTDESIGN_THREADS when set (>= 1), else hardware concurrency.
int worker_count();

/// Calls body(i) for i in [0, n) across worker threads with a static partition.
/// Each index is visited exactly once; callers write results into per-index
/// slots, so output does not depend on scheduling. Nested calls run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace optdesign

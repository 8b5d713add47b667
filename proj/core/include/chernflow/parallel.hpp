#pragma once

#include <cstdint>
#include <functional>

namespace chernflow {

/// Worker count used by grid kernels: hardware concurrency, capped by the
/// CHERNFLOW_THREADS environment variable when set.
int worker_count();

/// Splits [0, count) into contiguous chunks and runs fn(lo, hi) on each,
/// possibly on several threads. Chunks only ever write disjoint output
/// slots, so results do not depend on the worker count.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace chernflow

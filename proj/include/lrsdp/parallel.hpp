#pragma once

#include <functional>

#include "lrsdp/types.hpp"

namespace lrsdp {

// Global worker-count cap for kernel-internal parallelism. 0 = hardware
// concurrency. Thread-safe to read; set it once at startup.
void set_max_threads(int n);
int max_threads();

// Runs body(begin, end) over a fixed partition of [0, n). Chunk boundaries
// depend only on n and grain, never on the worker count, so any reduction
// that combines per-chunk partials in chunk order is bitwise reproducible.
// body must write to disjoint state per chunk.
void parallel_for(Index n, Index grain,
                  const std::function<void(Index, Index)>& body);

}  // namespace lrsdp

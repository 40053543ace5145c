#pragma once

#include <cstddef>
#include <functional>

namespace catclust {

/// Worker count used by parallel_for. Initialized from the CATCLUST_THREADS
/// environment variable (default 1).
std::size_t thread_count();
void set_thread_count(std::size_t threads);

/// Calls body(i) for every i in [0, count). Iterations are distributed in
/// static contiguous chunks. Nested calls run inline on the calling worker.
/// Callers write results into index-keyed slots, which keeps output
/// independent of the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace catclust

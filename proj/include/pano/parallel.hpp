#pragma once

#include <functional>

namespace pano {

/// Worker count: PANO_NUM_THREADS if set and positive, otherwise the
/// hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [begin, end) split into contiguous chunks across
/// worker threads. fn must only write state owned by index i.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace pano

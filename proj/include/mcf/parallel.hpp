#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mcf {

// Worker count: MCF_THREADS if set and positive, otherwise the hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n) over contiguous static chunks. Results must be written
// per index by the caller so reductions stay independent of the thread count.
// The first exception (lowest chunk) is rethrown after all workers finish.
void parallel_for(size_t n, const std::function<void(size_t)>& body, int threads = 0);

}  // namespace mcf

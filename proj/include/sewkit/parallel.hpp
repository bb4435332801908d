#pragma once

#include <cstddef>
#include <functional>

namespace sewkit {

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// processed exactly once; callers write results into per-index slots and
// reduce afterwards in index order. The first exception thrown by any body
// is rethrown on the calling thread.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

unsigned default_workers();

}  // namespace sewkit

#pragma once

#include <cstddef>
#include <functional>

namespace cwikel {

/// Worker count: CWIKEL_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cwikel

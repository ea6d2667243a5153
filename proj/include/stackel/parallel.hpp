#pragma once

#include <cstddef>
#include <functional>

namespace stackel {

/// Worker count: STACKEL_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count).  Each index is executed exactly once;
/// callers write results into per-index slots so output order is fixed.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace stackel

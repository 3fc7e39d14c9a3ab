#pragma once

#include <cstddef>
#include <functional>

namespace nslit {

/// Worker count: NSLIT_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, n) across worker threads. Each index is
/// handled exactly once; callers write results into per-index slots and
/// reduce them afterwards in a fixed order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nslit

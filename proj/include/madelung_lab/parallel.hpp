#pragma once

#include <cstddef>
#include <functional>

namespace mlab {

/// Worker count: MADELUNG_LAB_THREADS if set (>= 1), otherwise the hardware
/// concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) over a static partition. Each index is
/// handled by exactly one thread; callers store per-index results and
/// reduce serially so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mlab

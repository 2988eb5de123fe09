#pragma once

#include <cstddef>
#include <functional>

namespace copolab {

/// Worker count for internal fan-out: COPOLARITY_LAB_THREADS when set,
/// otherwise hardware concurrency capped at 8.
int worker_count();

/// Run fn(i) for i in [0, n). Results must be written by index so the
/// outcome is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace copolab

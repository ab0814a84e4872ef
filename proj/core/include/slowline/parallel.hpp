#pragma once

#include <cstddef>
#include <functional>

namespace slowline {

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is handled
// exactly once; callers write results into per-index slots so the outcome does
// not depend on scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace slowline

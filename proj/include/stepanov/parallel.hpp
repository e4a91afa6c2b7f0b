#pragma once

#include <functional>

namespace stepanov {

// Runs fn(0..count-1) on a small thread pool; serial when count is small or
// STEPANOV_NO_PARALLEL=1 is set. The first exception thrown by any item is
// rethrown after all workers join.
void parallel_for(int count, const std::function<void(int)>& fn);

} // namespace stepanov

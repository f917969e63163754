#pragma once

#include <cstddef>
#include <functional>

namespace bethe {

/// Runs fn(0) .. fn(count - 1) on up to `threads` workers. Work items must
/// write only to their own output slot; the first exception (lowest index)
/// is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace bethe

#pragma once

#include <cstddef>
#include <functional>

namespace ordinal {

/// Runs body(i) for i in [0, count) on a pool of worker threads. Calls made
/// from inside a worker run sequentially, so nested use does not oversubscribe.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Overrides the worker count (0 restores the hardware default).
void set_max_threads(unsigned threads);

}  // namespace ordinal

#pragma once

#include <cstddef>
#include <functional>

namespace ridgekit {

// Worker cap used by row- and grid-parallel loops (default 1).
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls fn(begin, end) over contiguous chunks of [0, count). Chunk boundaries
// depend only on count and the thread cap, so per-item results do not depend
// on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace ridgekit

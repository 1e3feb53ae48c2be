#pragma once

#include <cstddef>
#include <functional>

namespace hogkit {

// Worker count used by the parallel stages. Resolution order: the value set
// by set_thread_count (if nonzero), then HOGKIT_THREADS, then the hardware
// concurrency. Always >= 1.
std::size_t thread_count();

// 0 restores environment/hardware resolution.
void set_thread_count(std::size_t n);

// Runs fn(i) for every i in [begin, end), split into contiguous chunks over
// thread_count() workers. fn must only write to state owned by index i.
// Exceptions thrown by fn are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace hogkit

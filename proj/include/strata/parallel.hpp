#pragma once

#include <cstddef>
#include <functional>

namespace strata {

// Worker count: STRATA_THREADS if set, else hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous chunks so that
// any per-index results written by body are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace strata

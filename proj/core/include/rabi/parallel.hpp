#pragma once

#include <cstddef>
#include <functional>

namespace rabi {

// Worker count: RABI_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned thread_count();

// Calls body(i) for i in [0, n) on up to thread_count() threads. Each index
// is visited exactly once; the first exception thrown is rethrown after all
// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rabi

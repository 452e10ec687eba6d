#pragma once

#include <cstddef>
#include <functional>

namespace lens {

// Worker count: LENS_THREADS if set and positive, otherwise hardware concurrency.
std::size_t thread_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; iterations
// must write to disjoint memory for the result to be deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lens

#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace lacunar {

// Process-wide worker count used by the parallel loops below. Results never
// depend on it: every loop writes item i only from iteration i.
void set_worker_count(unsigned workers);
unsigned worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads. The first
// exception thrown by any iteration is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Pairwise summation with a fixed reduction tree (depends only on size).
double pairwise_sum(std::span<const double> values);

}  // namespace lacunar

#pragma once

#include <cstddef>
#include <functional>

namespace gbsc {

// Number of worker threads used by parallel_for. Zero restores the runtime default.
void set_thread_count(int threads);
int thread_count();

// Runs body(i) for i in [0, count). Iterations must write to disjoint
// outputs; every reduction in the library happens afterwards in index order,
// which keeps results independent of the schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gbsc

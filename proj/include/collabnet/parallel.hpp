#pragma once

#include <cstddef>
#include <functional>

namespace collabnet {

// Upper bound on worker threads used by replicate loops. 0 means one per
// hardware thread. Results never depend on this value.
void set_thread_count(unsigned threads);
unsigned thread_count();

// Runs body(i) for every i in [0, count). Each index is handled exactly once;
// callers write results into per-index slots so output order is fixed.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace collabnet

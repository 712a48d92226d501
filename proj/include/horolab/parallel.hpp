#pragma once

#include <cstddef>
#include <functional>

namespace horolab {

// Worker count used by parallel_for; 0 selects hardware_concurrency.
void set_worker_count(unsigned workers);
unsigned worker_count();

// Calls body(i) for i in [0, n) on the worker pool. Each index is handled by
// exactly one worker; callers write into per-index slots and reduce in index
// order afterwards so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace horolab

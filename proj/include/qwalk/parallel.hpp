#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qwalk {

// Worker count: QWALK_THREADS if set and positive, else hardware concurrency.
int thread_budget();

// Runs body(i) for i in [0,n). Results must be written to per-index slots;
// the caller reduces them in index order so output does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qwalk

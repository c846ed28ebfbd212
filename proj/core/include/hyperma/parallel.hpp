#pragma once

#include <cstddef>
#include <functional>

namespace hyperma {

// Worker count: hardware concurrency, capped by HYPERMA_THREADS when set.
unsigned worker_count();

// Calls body(i) for i in [0, count) across worker_count() threads in
// contiguous blocks. Bodies must write only to slot i of their outputs;
// callers reduce afterwards in index order, which keeps results independent
// of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hyperma

#pragma once

// Static-partition parallel loop over independent grid points.

#include <cstddef>
#include <functional>

namespace genscatter {

// GENSCATTER_THREADS if set, else hardware concurrency (at least 1)
unsigned default_threads();
void set_default_threads(unsigned n);

// calls fn(i) for i in [0, n); results must go to disjoint slots
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn,
                  unsigned threads = 0);

} // namespace genscatter

#pragma once

#include <cstddef>
#include <functional>

namespace recu {

/// Worker count used by the data-parallel loops in this library. Defaults to 1.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n). Iterations are split into contiguous blocks,
/// one per worker; results must not depend on which worker runs a block.
/// The first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace recu

#pragma once

#include <cstddef>
#include <functional>

namespace sigdet {

/// Number of worker threads used by Monte Carlo loops. Defaults to the
/// hardware concurrency, capped by the SIGDET_MAX_WORKERS environment
/// variable. Only affects runtime: all reductions are order independent.
std::size_t worker_count();

/// Overrides worker_count() for the current process (0 restores the default).
void set_worker_count(std::size_t workers);

/// Calls body(begin, end) on disjoint chunks covering [0, n). Chunk boundaries
/// do not depend on the worker count. Exceptions from any chunk are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sigdet

#pragma once

#include <cstddef>
#include <functional>

namespace oplab {

/// Number of worker threads a `jobs` request resolves to.
/// jobs == 0 means "all hardware threads"; jobs == 1 is the serial path.
int resolve_jobs(int jobs);

/// Runs body(0..count-1). With jobs == 1 this is a plain serial loop (the
/// reference path the tests compare against); otherwise iterations are
/// distributed over an OpenMP thread pool. Results must be index-addressed
/// by the caller so scheduling cannot change the outcome. The first
/// exception thrown by any iteration is rethrown after the loop drains.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

} // namespace oplab

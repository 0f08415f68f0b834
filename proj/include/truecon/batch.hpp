#pragma once

#include <cstddef>
#include <functional>

namespace truecon {

// Calls fn(i) for every i < n on up to `jobs` threads (jobs <= 1 runs inline,
// in order). The exception of the smallest failing index is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

} // namespace truecon

#pragma once

#include <cstddef>
#include <functional>

namespace ikwsms {

/// Calls body(i) for i in [0, count) on up to `threads` workers. Bodies must
/// write to disjoint outputs; the first exception thrown is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace ikwsms

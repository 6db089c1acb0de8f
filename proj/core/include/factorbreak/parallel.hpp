#pragma once

#include <cstddef>
#include <functional>

namespace factorbreak {

/// Runs body(i) for i in [0, n) on up to `threads` workers.
///
/// Work items are claimed dynamically, so `body` must write its result into
/// a slot owned by index i. The first exception (lowest index) is rethrown
/// after all workers join. threads <= 1 runs inline in index order.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace factorbreak

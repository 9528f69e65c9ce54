#pragma once

#include <cstddef>
#include <functional>

namespace strand {

/// Data-parallel width: STRAND_THREADS when set and positive, otherwise the
/// hardware concurrency.
unsigned parallel_width();

/// Calls body(begin, end) on disjoint chunks covering [0, n). Each index is visited
/// by exactly one chunk, so bodies that only write their own indices are
/// deterministic regardless of the width.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace strand

#pragma once

#include <cstddef>
#include <functional>

namespace biomaudit {

/// Runs fn(i) for i in [0, n) across hardware threads. Results must be
/// written to per-index slots; completion order carries no information, so
/// output stays deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace biomaudit

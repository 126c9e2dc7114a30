#pragma once

#include <cstddef>
#include <functional>

namespace dfrc {

/// Runs fn(i) for every i in [0, n), split across up to `threads` workers
/// (0 = hardware concurrency). Callers keep determinism by writing results
/// into slots addressed by i and reducing in index order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

}  // namespace dfrc

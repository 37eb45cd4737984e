#pragma once

#include <cstddef>
#include <functional>

namespace pitchblur {

/// Worker count from PITCHBLUR_THREADS, else the hardware concurrency.
unsigned default_parallelism();

/// Runs body(i) for i in [begin, end) on up to `threads` workers using static
/// contiguous chunks. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t begin, std::size_t end, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace pitchblur

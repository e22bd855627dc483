#pragma once

#include <cstddef>
#include <functional>

namespace layerscatter {

// LAYERSCATTER_THREADS if set, otherwise the hardware concurrency
std::size_t default_threads();

// body(i) for i in [0, count) over a fixed pool; the first exception is rethrown
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace layerscatter

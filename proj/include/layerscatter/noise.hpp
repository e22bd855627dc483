#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace layerscatter {

// Standard normal variates indexed by (seed, counter); identical on every platform.
class CounterNormal {
public:
    explicit CounterNormal(std::uint64_t seed) : seed_(seed) {}
    double operator()(std::uint64_t counter) const;

private:
    std::uint64_t seed_;
};

// values + N(0, (fraction * rms(values))^2), one counter per sample
std::vector<double> add_noise(std::span<const double> values, double fraction, std::uint64_t seed);

}  // namespace layerscatter

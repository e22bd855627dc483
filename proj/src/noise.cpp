#include "layerscatter/noise.hpp"

#include <cmath>
#include <numbers>

namespace layerscatter {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit(std::uint64_t bits) {
    // (0, 1], never zero so the logarithm stays finite
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double CounterNormal::operator()(std::uint64_t counter) const {
    const std::uint64_t pair = counter >> 1;
    const std::uint64_t key = mix(seed_ ^ mix(pair));
    const double u1 = unit(mix(key));
    const double u2 = unit(mix(key + 1));
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    return (counter & 1u) ? rad * std::sin(ang) : rad * std::cos(ang);
}

std::vector<double> add_noise(std::span<const double> values, double fraction, std::uint64_t seed) {
    double ss = 0.0;
    for (double v : values) ss += v * v;
    const double rms = values.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(values.size()));
    const double sigma = fraction * rms;
    const CounterNormal g(seed);
    std::vector<double> out(values.begin(), values.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sigma * g(i);
    return out;
}

}  // namespace layerscatter

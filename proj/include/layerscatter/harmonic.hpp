#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include "layerscatter/media.hpp"

namespace layerscatter {

using RealFn = std::function<double(double)>;

struct HarmonicConfig {
    std::size_t truncation = 80;    // highest simplex order J
    std::size_t quad_points = 4001; // nodes per axis of the iterated quadrature
    double tolerance = 1e-12;       // stop once the factorial tail drops below this
};

struct HarmonicValue {
    std::complex<double> value;
    double tail_bound = 0.0;  // sum over j > terms of |alpha|_1^j / j!
    std::size_t terms = 0;
    bool within_tolerance = true;
};

std::complex<double> singular_harmonic(const StepMedium& m, double y, double omega);
std::complex<double> singular_harmonic(double x0, std::span<const double> jumps,
                                       std::span<const double> r, double y, double omega);

HarmonicValue harmonic_exponential(const RealFn& alpha, double x0, double y, double omega,
                                   const HarmonicConfig& cfg = {});
HarmonicValue harmonic_exponential(const Sampled& alpha, double y, double omega,
                                   const HarmonicConfig& cfg = {});

// both E_alpha and E_{-alpha} from one series evaluation
struct HarmonicPair {
    std::complex<double> plus, minus;
    double tail_bound = 0.0;
    std::size_t terms = 0;
    bool within_tolerance = true;
};
HarmonicPair harmonic_pair(const RealFn& alpha, double x0, double y, double omega,
                           const HarmonicConfig& cfg = {});

HarmonicValue hyperbolic_tangent(const RealFn& alpha, double x0, double y, double omega,
                                 const HarmonicConfig& cfg = {});
HarmonicValue hyperbolic_tangent(const Sampled& alpha, double y, double omega,
                                 const HarmonicConfig& cfg = {});

// |E_{zeta_n}(omega) - E_alpha(omega)| on (x0, y) for the n-th standard approximant
double singular_approximation_gap(const ImpedanceProfile& profile, double y, double omega,
                                  std::size_t n, const HarmonicConfig& cfg = {});

}  // namespace layerscatter

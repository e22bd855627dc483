#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "layerscatter/harmonic.hpp"
#include "layerscatter/media.hpp"

namespace layerscatter {

// Echo data sum_j a_j delta(t - 2 j delta). `values` holds the reported
// samples: a_j / (2 delta) for continuous media, a_j itself when `raw`.
struct ReflectionSeries {
    double delta = 1.0;
    std::vector<double> a;
    std::vector<double> values;
    bool raw = false;

    std::size_t size() const { return a.size(); }
    double time(std::size_t j) const { return 2.0 * static_cast<double>(j) * delta; }  // 1-based
    std::vector<double> times() const;

    // t_j = j tau must be equally spaced starting at tau; a_j = tau d_j
    static ReflectionSeries from_samples(std::span<const double> t, std::span<const double> d);
};

struct ForwardOptions {
    std::size_t window = 1;  // averaging half-width k of the reported samples
};

// power series of 1/c for c_0 = 1, first len coefficients
std::vector<double> series_reciprocal(std::span<const double> c, std::size_t len);
// first len coefficients of b * d
std::vector<double> series_product(std::span<const double> b, std::span<const double> d,
                                   std::size_t len);

ReflectionSeries forward_from_reflectivities(std::span<const double> r, double delta,
                                             const ForwardOptions& opt = {});
ReflectionSeries forward_scatter(const ImpedanceProfile& profile, double x0, double x1,
                                 std::size_t n, const ForwardOptions& opt = {});
ReflectionSeries forward_scatter(const StepMedium& m, std::size_t n, const ForwardOptions& opt = {});
ReflectionSeries forward_scatter_alpha(const RealFn& alpha, double x0, double x1, std::size_t n,
                                       const ForwardOptions& opt = {});
ReflectionSeries forward_scatter_alpha(const Sampled& alpha, double x0, double x1, std::size_t n,
                                       const ForwardOptions& opt = {});

std::vector<std::complex<double>> spectrum(const StepMedium& m, std::span<const double> omega,
                                           std::size_t threads = 1);
std::vector<std::complex<double>> spectrum(const StandardApproximant& s,
                                           std::span<const double> omega, std::size_t threads = 1);

// alpha(t/2 + x0) / 2
std::vector<double> born_approximation(const ImpedanceProfile& profile, double x0,
                                       std::span<const double> t);
std::vector<double> born_residual(const ReflectionSeries& series, const ImpedanceProfile& profile,
                                  double x0);

}  // namespace layerscatter

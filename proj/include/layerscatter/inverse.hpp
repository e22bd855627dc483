#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "layerscatter/forward.hpp"
#include "layerscatter/media.hpp"
#include "layerscatter/opuc.hpp"

namespace layerscatter {

// m_0 = 1, m_k = sum_{j=1}^{k} a_j m_{k-j}
MomentVector moments_from_coefficients(std::span<const double> a);
MomentVector moments_from_data(const ReflectionSeries& series);
// max |(I - A) m - e_1|
double moment_residual(std::span<const double> a, std::span<const double> m);

// r_1 = m_1, r_{j+1} = <z Phi_j, 1> / <Phi*_j, 1>; throws DataInconsistencyError on |r| >= 1
VerblunskyList verblunsky_from_moments(std::span<const double> m);

struct InversionResult {
    double x0 = 0.0;
    double delta = 0.0;
    std::vector<double> y;      // x0 + j delta, j = 0..n
    std::vector<double> zeta;   // zeta_0 = zeta0, then one value per layer
    std::vector<double> r;      // r_1..r_n
    std::vector<double> alpha;  // atanh(r_j) / delta at y_1..y_n
    double moment_residual = 0.0;
    double max_abs_r = 0.0;
};

InversionResult invert_scatter(const ReflectionSeries& series, double x0, double zeta0);
InversionResult invert_scatter(std::span<const double> t, std::span<const double> d, double x0,
                               double zeta0);

struct BornInversion {
    std::vector<double> y;
    std::vector<double> zeta;
};

// alpha(y_j) = 2 d(t_j), zeta = zeta0 exp(-2 int alpha)
BornInversion born_invert(const ReflectionSeries& series, double x0, double zeta0);

struct NoiseTrial {
    std::uint64_t seed = 0;
    double error = 0.0;  // relative l2 against the truth samples
    bool aborted = false;
    std::size_t abort_step = 0;
};

// perturb the reported samples of `clean`, invert, compare with truth (n+1 values)
NoiseTrial noise_trial(const ReflectionSeries& clean, double fraction, std::uint64_t seed,
                       double x0, double zeta0, std::span<const double> truth);

struct LayerStripResult {
    StepMedium medium;
    bool complete = true;
    double residual = 0.0;          // mean |R|^2 left after the last strip
    double lambda_tolerance = 0.0;  // 0 in exact mode
    double noise_floor = 0.0;
};

// exact mode: the reflection response is handled as an almost periodic series
LayerStripResult layer_strip(const StepMedium& m, double zeta0);

using Sampler = std::function<std::complex<double>(double)>;

struct NumericStripOptions {
    double threshold = 0.0;     // 0 selects 10x the noise floor
    double coarse_ratio = 50.0; // first scan uses the window L / coarse_ratio
    double oversampling = 8.0;  // omega step = pi / (oversampling (x1 - x0))
    std::size_t max_layers = 64;
};

// numeric mode: Cesaro means of samples of R on (-L, L)
LayerStripResult layer_strip(const Sampler& reflection, double x0, double x1, double zeta0,
                             double L, const NumericStripOptions& opt = {});

struct ShortRangeResult {
    double zeta = 0.0;
    double gamma = 0.0;
    double last_term = 0.0;
    double operator_norm = 0.0;  // max row sum of the discretized kernel
    std::size_t order = 0;
};

inline constexpr std::size_t short_range_max_order = 6;

ShortRangeResult short_range_invert(const ReflectionSeries& series, double x0, double zeta0,
                                    double int_l1, double int_l2, double y, std::size_t order);

}  // namespace layerscatter

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "layerscatter/media.hpp"

namespace layerscatter {

std::complex<double> scattering_polynomial(int p, int q, std::complex<double> z);

struct EigenResidual {
    double residual = 0.0;       // at step h
    double residual_half = 0.0;  // at step h/2
    double ratio = 0.0;          // residual / residual_half, about 4 for second order
};

EigenResidual laplace_beltrami_check(int p, int q, std::complex<double> z, double h = 1e-3);

struct APTerm {
    double lambda;
    std::complex<double> coeff;
};

// sum_k coeff_k e^{i lambda_k omega}, lambdas increasing
struct APSeries {
    std::vector<APTerm> terms;

    std::complex<double> operator()(double omega) const;
    double norm2() const;
};

inline constexpr double ap_merge_tolerance = 1e-12;
inline constexpr std::size_t ap_enumeration_cap = 10'000'000;

// sort and merge coinciding frequencies
APSeries ap_normalize(std::vector<APTerm> terms);
APSeries ap_add(const APSeries& a, const APSeries& b);
APSeries ap_scale(const APSeries& a, std::complex<double> s);
APSeries ap_shift(const APSeries& a, double dlambda);
// product truncated to frequencies <= lambda_max
APSeries ap_multiply(const APSeries& a, const APSeries& b, double lambda_max);

// g(xi) of a step medium as an almost periodic series in omega, lambda <= lambda_max
APSeries ap_series(const StepMedium& m, std::complex<double> xi, double lambda_max,
                   std::size_t cap = ap_enumeration_cap);

struct CesaroMean {
    std::complex<double> value;
    double L;
};

// (1/2L) int_{-L}^{L} f e^{-i lambda omega}, f sampled uniformly including both ends
CesaroMean besicovitch_coefficient(std::span<const std::complex<double>> f, double L,
                                   double lambda);

// Cesaro mean of -log(1 - |R|^2) over (-L, L)
CesaroMean singular_trace(std::span<const double> abs_r, double L);

struct TraceCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

// int -log(1-|R|^2) d omega against pi int alpha^2
TraceCheck classical_trace_check(std::span<const double> omega,
                                 std::span<const std::complex<double>> R, const Sampled& alpha);

}  // namespace layerscatter

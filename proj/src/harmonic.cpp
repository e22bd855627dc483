#include "layerscatter/harmonic.hpp"

#include <cmath>
#include <vector>

#include "layerscatter/errors.hpp"

namespace layerscatter {

using cplx = std::complex<double>;

namespace {

// Cumulative integral on a uniform grid with the four-point rule on every cell.
template <class T>
void cumulative(const std::vector<T>& f, double h, std::vector<T>& out) {
    const std::size_t n = f.size() - 1;
    out[0] = T(0);
    if (n < 3) {
        for (std::size_t k = 0; k < n; ++k) out[k + 1] = out[k] + 0.5 * h * (f[k] + f[k + 1]);
        return;
    }
    const double w = h / 24.0;
    out[1] = w * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    for (std::size_t k = 1; k + 2 <= n; ++k)
        out[k + 1] = out[k] + w * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
    out[n] = out[n - 1] + w * (f[n - 3] - 5.0 * f[n - 2] + 19.0 * f[n - 1] + 9.0 * f[n]);
}

double factorial_tail(double a, std::size_t after) {
    // sum_{j > after} a^j / j!
    double term = 1.0;
    for (std::size_t j = 1; j <= after; ++j) term *= a / static_cast<double>(j);
    double tail = 0.0;
    for (std::size_t j = after + 1; j < after + 400; ++j) {
        term *= a / static_cast<double>(j);
        tail += term;
        if (term <= 1e-17 * tail || term == 0.0) break;
    }
    return tail;
}

}  // namespace

cplx singular_harmonic(double x0, std::span<const double> jumps, std::span<const double> r,
                       double y, double omega) {
    if (jumps.size() != r.size()) throw ArgumentError("jumps and reflectivities differ in length");
    cplx acc(0.0);
    for (std::size_t j = 0; j < jumps.size() && jumps[j] < y; ++j) {
        const cplx e = 1.0 + acc;
        acc += r[j] * std::polar(1.0, 2.0 * (jumps[j] - x0) * omega) * std::conj(e);
    }
    return 1.0 + acc;
}

cplx singular_harmonic(const StepMedium& m, double y, double omega) {
    const auto& X = m.interval();
    if (!(y > X.x0 && y <= X.x1)) throw DomainError("y outside (x0, x1]");
    const auto r = m.reflectivities();
    return singular_harmonic(X.x0, m.jumps(), r, y, omega);
}

HarmonicPair harmonic_pair(const RealFn& alpha, double x0, double y, double omega,
                           const HarmonicConfig& cfg) {
    if (!(y > x0)) throw DomainError("harmonic exponential needs y > x0");
    if (cfg.truncation < 1 || cfg.quad_points < 2) throw ArgumentError("invalid harmonic config");
    const std::size_t n = cfg.quad_points - 1;
    const double h = (y - x0) / static_cast<double>(n);

    std::vector<cplx> kernel(n + 1);
    std::vector<double> absa(n + 1), l1(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double x = k == n ? y : x0 + static_cast<double>(k) * h;
        const double a = alpha(x);
        absa[k] = std::abs(a);
        kernel[k] = a * std::polar(1.0, 2.0 * (x - x0) * omega);
    }
    cumulative(absa, h, l1);
    const double norm = l1[n];

    // term_j(x) = int_{x0}^{x} alpha e^{2i(s-x0)omega} conj(term_{j-1}(s)) ds
    std::vector<cplx> term(n + 1, cplx(1.0)), f(n + 1), next(n + 1);
    HarmonicPair out{cplx(1.0), cplx(1.0)};
    for (std::size_t j = 1; j <= cfg.truncation; ++j) {
        for (std::size_t k = 0; k <= n; ++k) f[k] = kernel[k] * std::conj(term[k]);
        cumulative(f, h, next);
        std::swap(term, next);
        const cplx t = term[n];
        out.plus += t;
        out.minus += (j % 2 == 1) ? -t : t;
        out.terms = j;
        out.tail_bound = factorial_tail(norm, j);
        if (out.tail_bound <= cfg.tolerance) break;
    }
    out.within_tolerance = out.tail_bound <= cfg.tolerance;
    return out;
}

HarmonicValue harmonic_exponential(const RealFn& alpha, double x0, double y, double omega,
                                   const HarmonicConfig& cfg) {
    const auto p = harmonic_pair(alpha, x0, y, omega, cfg);
    return {p.plus, p.tail_bound, p.terms, p.within_tolerance};
}

HarmonicValue harmonic_exponential(const Sampled& alpha, double y, double omega,
                                   const HarmonicConfig& cfg) {
    return harmonic_exponential([&](double x) { return alpha(x); }, alpha.x0, y, omega, cfg);
}

HarmonicValue hyperbolic_tangent(const RealFn& alpha, double x0, double y, double omega,
                                 const HarmonicConfig& cfg) {
    const auto p = harmonic_pair(alpha, x0, y, omega, cfg);
    return {(p.plus - p.minus) / (p.plus + p.minus), p.tail_bound, p.terms, p.within_tolerance};
}

HarmonicValue hyperbolic_tangent(const Sampled& alpha, double y, double omega,
                                 const HarmonicConfig& cfg) {
    return hyperbolic_tangent([&](double x) { return alpha(x); }, alpha.x0, y, omega, cfg);
}

double singular_approximation_gap(const ImpedanceProfile& profile, double y, double omega,
                                  std::size_t n, const HarmonicConfig& cfg) {
    const double x0 = profile.interval().x0;
    const auto sub = profile.restricted(Interval(x0, y));
    const auto s = standard_approximant(sub, n);
    const auto jumps = s.jumps();
    const cplx singular = singular_harmonic(x0, jumps, s.reflectivities, y, omega);
    const auto regular =
        harmonic_exponential([&](double x) { return sub.alpha(x); }, x0, y, omega, cfg);
    return std::abs(singular - regular.value);
}

}  // namespace layerscatter

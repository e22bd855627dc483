#include "layerscatter/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "layerscatter/errors.hpp"

namespace layerscatter {

using cplx = std::complex<double>;

namespace {

constexpr int max_order = 40;

const std::array<double, max_order + 1>& factorials() {
    static const auto table = [] {
        std::array<double, max_order + 1> f{};
        f[0] = 1.0;
        for (int k = 1; k <= max_order; ++k) f[k] = f[k - 1] * k;
        return f;
    }();
    return table;
}

cplx ipow(cplx z, int k) {
    cplx r(1.0);
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

double trapezoid_mean_weight(std::size_t k, std::size_t n) {
    return (k == 0 || k + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

cplx scattering_polynomial(int p, int q, cplx z) {
    if (p < 0 || q < 0) return 0.0;
    if (q == 0) return ipow(z, p);
    if (p == 0) return 0.0;
    if (p + q > max_order) throw DomainError("scattering polynomial order above 40");
    const auto& f = factorials();
    const int N = p + q - 1;
    const cplx zb = std::conj(z);
    cplx sum(0.0);
    for (int k = std::max(p, q); k <= N; ++k) {
        const double c = f[k] / (f[N - k] * f[k - p] * f[k - q]);
        sum += ((k % 2) ? -c : c) * ipow(z, k - q) * ipow(zb, k - p);
    }
    const double pre = ((p % 2) ? -1.0 : 1.0) / q;
    return pre * (1.0 - std::norm(z)) * sum;
}

EigenResidual laplace_beltrami_check(int p, int q, cplx z, double h) {
    if (!(h > 0.0)) throw ArgumentError("step must be positive");
    if (!(std::abs(z) < 1.0 - h)) throw DomainError("point too close to the unit circle");
    auto residual = [&](double s) {
        auto f = [&](double dx, double dy) { return scattering_polynomial(p, q, z + cplx(dx, dy)); };
        const cplx c = f(0, 0);
        const cplx lap = (f(s, 0) + f(-s, 0) + f(0, s) + f(0, -s) - 4.0 * c) / (s * s);
        const cplx lb = -0.25 * (1.0 - std::norm(z)) * lap;
        return std::abs(lb - static_cast<double>(p * q) * c);
    };
    EigenResidual r;
    r.residual = residual(h);
    r.residual_half = residual(0.5 * h);
    r.ratio = r.residual_half > 0.0 ? r.residual / r.residual_half : 0.0;
    return r;
}

cplx APSeries::operator()(double omega) const {
    cplx s(0.0);
    for (const auto& t : terms) s += t.coeff * std::polar(1.0, t.lambda * omega);
    return s;
}

double APSeries::norm2() const {
    double s = 0.0;
    for (const auto& t : terms) s += std::norm(t.coeff);
    return s;
}

APSeries ap_normalize(std::vector<APTerm> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const APTerm& a, const APTerm& b) { return a.lambda < b.lambda; });
    APSeries out;
    for (const auto& t : terms) {
        if (!out.terms.empty()) {
            auto& last = out.terms.back();
            if (std::abs(t.lambda - last.lambda) <= ap_merge_tolerance * std::abs(t.lambda)) {
                last.coeff += t.coeff;
                continue;
            }
        }
        out.terms.push_back(t);
    }
    return out;
}

APSeries ap_add(const APSeries& a, const APSeries& b) {
    auto t = a.terms;
    t.insert(t.end(), b.terms.begin(), b.terms.end());
    return ap_normalize(std::move(t));
}

APSeries ap_scale(const APSeries& a, cplx s) {
    auto out = a;
    for (auto& t : out.terms) t.coeff *= s;
    return out;
}

APSeries ap_shift(const APSeries& a, double dlambda) {
    auto out = a;
    for (auto& t : out.terms) t.lambda += dlambda;
    return out;
}

APSeries ap_multiply(const APSeries& a, const APSeries& b, double lambda_max) {
    std::vector<APTerm> t;
    for (const auto& u : a.terms)
        for (const auto& v : b.terms) {
            if (u.lambda + v.lambda > lambda_max * (1.0 + ap_merge_tolerance)) break;
            t.push_back({u.lambda + v.lambda, u.coeff * v.coeff});
        }
    return ap_normalize(std::move(t));
}

APSeries ap_series(const StepMedium& m, cplx xi, double lambda_max, std::size_t cap) {
    if (!(std::abs(xi) < 1.0)) throw DomainError("ap_series needs |xi| < 1");
    const auto& X = m.interval();
    const auto& y = m.jumps();
    const auto r = m.reflectivities();
    const std::size_t n = y.size();
    std::vector<double> s(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        s[j] = (j == n ? X.x1 : y[j]) - (j == 0 ? X.x0 : y[j - 1]);
    const double budget = 0.5 * lambda_max * (1.0 + ap_merge_tolerance);

    std::vector<APTerm> terms;
    auto emit = [&](double acc, cplx c) {
        if (c == cplx(0.0)) return;
        terms.push_back({2.0 * acc, c});
        if (terms.size() > cap) throw ResourceError("almost periodic enumeration above cap");
    };
    // j is the 1-based position being chosen, prev = k_{j-1}
    std::function<void(std::size_t, int, double, cplx)> walk = [&](std::size_t j, int prev,
                                                                   double acc, cplx coeff) {
        if (j == n + 2) {
            emit(acc, coeff * ipow(xi, prev));
            return;
        }
        for (int k = 0;; ++k) {
            const double next = acc + k * s[j - 1];
            if (next > budget) break;
            if (prev + k > max_order)
                throw ResourceError("almost periodic enumeration needs polynomial order above 40");
            const cplx c = coeff * scattering_polynomial(prev, k, r[j - 2]);
            if (k == 0) {
                // block structure: every later entry is zero
                emit(next, c);
                if (j == n + 1 && xi == cplx(0.0)) break;
                continue;
            }
            if (c != cplx(0.0)) walk(j + 1, k, next, c);
        }
    };
    walk(2, 1, s[0], cplx(1.0));
    return ap_normalize(std::move(terms));
}

CesaroMean besicovitch_coefficient(std::span<const cplx> f, double L, double lambda) {
    const std::size_t n = f.size();
    if (n < 2) throw ArgumentError("need at least two samples");
    if (!(L > 0.0)) throw ArgumentError("L must be positive");
    const double h = 2.0 * L / static_cast<double>(n - 1);
    // rotate the phase incrementally to keep the loop cheap
    const cplx step = std::polar(1.0, -lambda * h);
    cplx ph = std::polar(1.0, lambda * L);
    cplx s(0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if ((k & 1023u) == 0) ph = std::polar(1.0, -lambda * (-L + static_cast<double>(k) * h));
        s += trapezoid_mean_weight(k, n) * f[k] * ph;
        ph *= step;
    }
    return {s * h / (2.0 * L), L};
}

CesaroMean singular_trace(std::span<const double> abs_r, double L) {
    const std::size_t n = abs_r.size();
    if (n < 2) throw ArgumentError("need at least two samples");
    if (!(L > 0.0)) throw ArgumentError("L must be positive");
    const double h = 2.0 * L / static_cast<double>(n - 1);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = std::abs(abs_r[k]);
        if (!(a < 1.0)) throw DomainError("|R| must stay below 1");
        s += trapezoid_mean_weight(k, n) * -std::log1p(-a * a);
    }
    return {cplx(s * h / (2.0 * L)), L};
}

TraceCheck classical_trace_check(std::span<const double> omega, std::span<const cplx> R,
                                 const Sampled& alpha) {
    if (omega.size() != R.size()) throw ArgumentError("grid and values differ in length");
    TraceCheck t;
    for (std::size_t k = 0; k + 1 < omega.size(); ++k) {
        auto g = [&](std::size_t i) {
            const double a = std::abs(R[i]);
            if (!(a < 1.0)) throw DomainError("|R| must stay below 1");
            return -std::log1p(-a * a);
        };
        t.lhs += 0.5 * (omega[k + 1] - omega[k]) * (g(k) + g(k + 1));
    }
    const auto& v = alpha.values;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        t.rhs += 0.5 * alpha.h * (v[k] * v[k] + v[k + 1] * v[k + 1]);
    t.rhs *= std::acos(-1.0);
    t.holds = t.lhs <= t.rhs * (1.0 + 1e-3);
    return t;
}

}  // namespace layerscatter

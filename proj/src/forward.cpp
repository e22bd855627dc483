#include "layerscatter/forward.hpp"

#include <algorithm>
#include <cmath>

#include "layerscatter/errors.hpp"
#include "layerscatter/moebius.hpp"
#include "layerscatter/opuc.hpp"
#include "layerscatter/parallel.hpp"

namespace layerscatter {

std::vector<double> ReflectionSeries::times() const {
    std::vector<double> t(a.size());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = time(j + 1);
    return t;
}

ReflectionSeries ReflectionSeries::from_samples(std::span<const double> t,
                                                std::span<const double> d) {
    if (t.size() != d.size()) throw ArgumentError("time and data columns differ in length");
    if (t.empty()) throw ArgumentError("empty data");
    const double tau = t[0];
    if (!(tau > 0.0)) throw ArgumentError("first sample time must be positive");
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double expect = tau * static_cast<double>(j + 1);
        if (std::abs(t[j] - expect) > 1e-9 * expect)
            throw ArgumentError("data times must be equally spaced multiples of the step");
    }
    ReflectionSeries s;
    s.delta = 0.5 * tau;
    s.values.assign(d.begin(), d.end());
    s.a.resize(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) s.a[j] = tau * d[j];
    return s;
}

std::vector<double> series_reciprocal(std::span<const double> c, std::size_t len) {
    if (c.empty() || c[0] != 1.0) throw ArgumentError("series must start with 1");
    std::vector<double> d(len, 0.0);
    if (len == 0) return d;
    d[0] = 1.0;
    for (std::size_t m = 1; m < len; ++m) {
        const std::size_t top = std::min(m, c.size() - 1);
        double s = 0.0;
        for (std::size_t i = 1; i <= top; ++i) s += c[i] * d[m - i];
        d[m] = -s;
    }
    return d;
}

std::vector<double> series_product(std::span<const double> b, std::span<const double> d,
                                   std::size_t len) {
    std::vector<double> out(len, 0.0);
    if (b.empty() || d.empty()) return out;
    for (std::size_t m = 0; m < len; ++m) {
        const std::size_t lo = m >= d.size() ? m - (d.size() - 1) : 0;
        const std::size_t hi = std::min(m, b.size() - 1);
        double s = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) s += b[i] * d[m - i];
        out[m] = s;
    }
    return out;
}

ReflectionSeries forward_from_reflectivities(std::span<const double> r, double delta,
                                             const ForwardOptions& opt) {
    if (!(delta > 0.0)) throw ArgumentError("delta must be positive");
    if (opt.window < 1) throw ArgumentError("window must be at least 1");
    const std::size_t n = r.size();
    const auto q = opuc_recursion(r);
    std::vector<double> b(n + 1), c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        b[k] = 0.5 * (q.psi_star[k] - q.phi_star[k]);
        c[k] = 0.5 * (q.psi_star[k] + q.phi_star[k]);
    }
    const std::size_t k = opt.window;
    const std::size_t len = n + k;  // a_0 .. a_{n+k-1}
    const auto d = series_reciprocal(c, len);
    const auto full = series_product(b, d, len);

    ReflectionSeries s;
    s.delta = delta;
    s.a.assign(full.begin() + 1, full.begin() + 1 + static_cast<std::ptrdiff_t>(n));
    s.values.resize(n);
    for (std::size_t j = 1; j <= n; ++j) {
        double sum = 0.0;
        for (std::size_t idx = j + 1 > k ? j + 1 - k : 0; idx <= j + k - 1; ++idx) sum += full[idx];
        s.values[j - 1] = sum / (2.0 * static_cast<double>(k) * delta);
    }
    return s;
}

ReflectionSeries forward_scatter(const ImpedanceProfile& profile, double x0, double x1,
                                 std::size_t n, const ForwardOptions& opt) {
    const Interval X(x0, x1);
    const auto& P = profile.interval();
    const auto sub = (P.x0 == x0 && P.x1 == x1) ? profile : profile.restricted(X);
    const auto s = standard_approximant(sub, n);
    return forward_from_reflectivities(s.reflectivities, s.delta, opt);
}

ReflectionSeries forward_scatter(const StepMedium& m, std::size_t n, const ForwardOptions& opt) {
    if (n == 0) throw ArgumentError("forward scattering needs n >= 1");
    const auto& X = m.interval();
    const double delta = X.length() / static_cast<double>(n + 1);
    std::vector<double> r(n);
    for (std::size_t j = 1; j <= n; ++j) {
        const double y = X.x0 + static_cast<double>(j) * delta;
        r[j - 1] = reflectivity(m(y - 0.5 * delta), m(y + 0.5 * delta));
    }
    auto s = forward_from_reflectivities(r, delta, opt);
    s.values = s.a;
    s.raw = true;
    return s;
}

ReflectionSeries forward_scatter_alpha(const RealFn& alpha, double x0, double x1, std::size_t n,
                                       const ForwardOptions& opt) {
    if (n == 0) throw ArgumentError("forward scattering needs n >= 1");
    const Interval X(x0, x1);
    const double delta = X.length() / static_cast<double>(n + 1);
    std::vector<double> r(n);
    for (std::size_t j = 1; j <= n; ++j) {
        r[j - 1] = std::tanh(delta * alpha(x0 + static_cast<double>(j) * delta));
        if (std::abs(r[j - 1]) >= max_reflectivity) throw DomainError("reflectivity too close to 1");
    }
    return forward_from_reflectivities(r, delta, opt);
}

ReflectionSeries forward_scatter_alpha(const Sampled& alpha, double x0, double x1, std::size_t n,
                                       const ForwardOptions& opt) {
    return forward_scatter_alpha([&](double x) { return alpha(x); }, x0, x1, n, opt);
}

std::vector<std::complex<double>> spectrum(const StepMedium& m, std::span<const double> omega,
                                           std::size_t threads) {
    const auto r = m.reflectivities();
    const auto& X = m.interval();
    std::vector<std::complex<double>> out(omega.size());
    parallel_for(omega.size(), threads, [&](std::size_t i) {
        out[i] = layered_reflection(X.x0, X.x1, m.jumps(), r, omega[i]);
    });
    return out;
}

std::vector<std::complex<double>> spectrum(const StandardApproximant& s,
                                           std::span<const double> omega, std::size_t threads) {
    const auto y = s.jumps();
    std::vector<std::complex<double>> out(omega.size());
    parallel_for(omega.size(), threads, [&](std::size_t i) {
        out[i] = layered_reflection(s.x0(), s.x1(), y, s.reflectivities, omega[i]);
    });
    return out;
}

std::vector<double> born_approximation(const ImpedanceProfile& profile, double x0,
                                       std::span<const double> t) {
    std::vector<double> out(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = 0.5 * profile.alpha(0.5 * t[j] + x0);
    return out;
}

std::vector<double> born_residual(const ReflectionSeries& series, const ImpedanceProfile& profile,
                                  double x0) {
    const auto t = series.times();
    const auto& X = profile.interval();
    if (!t.empty() && (x0 < X.x0 || 0.5 * t.back() + x0 > X.x1))
        throw ArgumentError("series times fall outside the profile interval");
    auto born = born_approximation(profile, x0, t);
    for (std::size_t j = 0; j < born.size(); ++j) born[j] = series.values[j] - born[j];
    return born;
}

}  // namespace layerscatter

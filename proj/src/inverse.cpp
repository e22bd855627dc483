#include "layerscatter/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "layerscatter/errors.hpp"
#include "layerscatter/noise.hpp"
#include "layerscatter/specfun.hpp"

namespace layerscatter {

using cplx = std::complex<double>;

MomentVector moments_from_coefficients(std::span<const double> a) {
    std::vector<double> c(a.size() + 1);
    c[0] = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) c[j + 1] = -a[j];
    return series_reciprocal(c, a.size() + 1);
}

MomentVector moments_from_data(const ReflectionSeries& series) {
    return moments_from_coefficients(series.a);
}

double moment_residual(std::span<const double> a, std::span<const double> m) {
    if (m.size() != a.size() + 1) throw ArgumentError("moment vector has the wrong length");
    double worst = std::abs(m[0] - 1.0);
    for (std::size_t k = 1; k < m.size(); ++k) {
        double s = m[k];
        for (std::size_t j = 1; j <= k; ++j) s -= a[j - 1] * m[k - j];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

VerblunskyList verblunsky_from_moments(std::span<const double> m) {
    if (m.empty() || std::abs(m[0] - 1.0) > 1e-12) throw ArgumentError("moments must start with 1");
    const std::size_t n = m.size() - 1;
    VerblunskyList r(n);
    if (n == 0) return r;
    auto check = [&](double v, std::size_t step) {
        if (!(std::abs(v) < max_reflectivity))
            throw DataInconsistencyError(
                "reflectivity of modulus >= 1 at step " + std::to_string(step), step);
    };
    r[0] = m[1];
    check(r[0], 1);
    std::vector<double> phi(n + 1, 0.0), next(n + 1, 0.0);
    phi[0] = -r[0];
    phi[1] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k <= j; ++k) {
            num += phi[k] * m[k + 1];
            den += phi[j - k] * m[k];
        }
        if (den == 0.0 || !std::isfinite(num / den))
            throw DataInconsistencyError("degenerate moment sequence at step " + std::to_string(j + 1),
                                         j + 1);
        const double rj = num / den;
        check(rj, j + 1);
        r[j] = rj;
        for (std::size_t k = 0; k <= j + 1; ++k) {
            const double shifted = k == 0 ? 0.0 : phi[k - 1];
            const double reversed = k <= j ? phi[j - k] : 0.0;
            next[k] = shifted - rj * reversed;
        }
        std::swap(phi, next);
    }
    return r;
}

InversionResult invert_scatter(const ReflectionSeries& series, double x0, double zeta0) {
    if (!(zeta0 > 0.0)) throw ArgumentError("zeta0 must be positive");
    const auto m = moments_from_data(series);
    InversionResult out;
    out.x0 = x0;
    out.delta = series.delta;
    out.moment_residual = moment_residual(series.a, m);
    out.r = verblunsky_from_moments(m);
    const std::size_t n = out.r.size();
    out.y.resize(n + 1);
    out.zeta.resize(n + 1);
    out.alpha.resize(n);
    out.y[0] = x0;
    out.zeta[0] = zeta0;
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double h = std::atanh(out.r[j - 1]);
        acc += h;
        out.y[j] = x0 + static_cast<double>(j) * series.delta;
        out.zeta[j] = zeta0 * std::exp(-2.0 * acc);
        out.alpha[j - 1] = h / series.delta;
        out.max_abs_r = std::max(out.max_abs_r, std::abs(out.r[j - 1]));
    }
    return out;
}

InversionResult invert_scatter(std::span<const double> t, std::span<const double> d, double x0,
                               double zeta0) {
    return invert_scatter(ReflectionSeries::from_samples(t, d), x0, zeta0);
}

BornInversion born_invert(const ReflectionSeries& series, double x0, double zeta0) {
    if (!(zeta0 > 0.0)) throw ArgumentError("zeta0 must be positive");
    const std::size_t n = series.size();
    BornInversion out;
    out.y.resize(n + 1);
    out.zeta.resize(n + 1);
    out.y[0] = x0;
    out.zeta[0] = zeta0;
    const double h = series.delta;
    // alpha at x0 is not observed; hold the first sample
    double prev = n > 0 ? 2.0 * series.values[0] : 0.0;
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double a = 2.0 * series.values[j - 1];
        acc += 0.5 * h * (prev + a);
        prev = a;
        out.y[j] = x0 + static_cast<double>(j) * h;
        out.zeta[j] = zeta0 * std::exp(-2.0 * acc);
    }
    return out;
}

NoiseTrial noise_trial(const ReflectionSeries& clean, double fraction, std::uint64_t seed,
                       double x0, double zeta0, std::span<const double> truth) {
    if (truth.size() != clean.size() + 1) throw ArgumentError("truth needs n+1 samples");
    ReflectionSeries noisy = clean;
    noisy.values = add_noise(clean.values, fraction, seed);
    const double scale = clean.raw ? 1.0 : 2.0 * clean.delta;
    for (std::size_t j = 0; j < noisy.a.size(); ++j) noisy.a[j] = scale * noisy.values[j];
    NoiseTrial trial;
    trial.seed = seed;
    try {
        const auto inv = invert_scatter(noisy, x0, zeta0);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < truth.size(); ++j) {
            num += (inv.zeta[j] - truth[j]) * (inv.zeta[j] - truth[j]);
            den += truth[j] * truth[j];
        }
        trial.error = std::sqrt(num / den);
    } catch (const DataInconsistencyError& e) {
        trial.aborted = true;
        trial.abort_step = e.step();
        trial.error = std::numeric_limits<double>::quiet_NaN();
    }
    return trial;
}

namespace {

StepMedium assemble(const Interval& X, double zeta0, const std::vector<double>& y,
                    const std::vector<double>& r) {
    std::vector<double> c{zeta0};
    for (double v : r) c.push_back(c.back() * (1.0 - v) / (1.0 + v));
    return StepMedium(X, y, std::move(c));
}

// tail reflection after removing phi_{e^{i lambda omega}, r}: (u - r) / (1 - r u), u = e^{-i lambda omega} R
APSeries strip_series(const APSeries& s, double lambda, double r, double valid) {
    APSeries v;
    for (const auto& t : s.terms) {
        const double l = t.lambda - lambda;
        if (std::abs(l) <= ap_merge_tolerance * std::max(lambda, 1.0)) continue;
        if (l > valid) break;
        v.terms.push_back({l, t.coeff});
    }
    const auto w = ap_scale(v, 1.0 / (1.0 - r * r));
    const auto q = ap_scale(w, r);
    APSeries acc = w, power = w;
    while (true) {
        power = ap_multiply(power, q, valid);
        if (power.terms.empty()) break;
        acc = ap_add(acc, power);
    }
    return acc;
}

}  // namespace

LayerStripResult layer_strip(const StepMedium& m, double zeta0) {
    if (!(zeta0 > 0.0)) throw ArgumentError("zeta0 must be positive");
    constexpr double threshold = 1e-12;
    const auto& X = m.interval();
    double valid = 2.0 * X.length();
    auto series = ap_series(m, 0.0, valid);
    std::vector<double> y, r;
    double offset = X.x0;
    while (true) {
        const auto it = std::find_if(series.terms.begin(), series.terms.end(),
                                     [&](const APTerm& t) { return std::abs(t.coeff) > threshold; });
        if (it == series.terms.end()) break;
        const double lambda = it->lambda;
        const double rj = it->coeff.real();
        const double yj = offset + 0.5 * lambda;
        if (!(yj < X.x1) || !(std::abs(rj) < max_reflectivity)) break;
        y.push_back(yj);
        r.push_back(rj);
        valid -= lambda;
        series = strip_series(series, lambda, rj, valid);
        offset = yj;
    }
    LayerStripResult out{assemble(X, zeta0, y, r)};
    out.residual = series.norm2();
    out.complete = true;
    return out;
}

namespace {

// samples R(k h) for |k| <= K with Cesaro means over sub-windows
class Spectrum {
public:
    Spectrum(std::vector<cplx> values, double step, std::size_t half)
        : v_(std::move(values)), h_(step), K_(half) {}

    double window() const { return h_ * static_cast<double>(K_); }
    cplx& at(std::ptrdiff_t k) { return v_[static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(K_))]; }

    double mean_power() const {
        double s = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const double w = (i == 0 || i + 1 == v_.size()) ? 0.5 : 1.0;
            s += w * std::norm(v_[i]);
        }
        return s / static_cast<double>(2 * K_);
    }

    // Fejer-weighted mean over |k| <= kc, normalized to 1 on a pure tone
    cplx fejer(double lambda, std::size_t kc) const {
        const auto K = static_cast<std::ptrdiff_t>(K_);
        const auto c = static_cast<std::ptrdiff_t>(kc);
        const cplx rot = std::polar(1.0, -lambda * h_);
        cplx ph, s(0.0);
        double wsum = 0.0;
        for (std::ptrdiff_t k = -c; k <= c; ++k) {
            if (((k + c) & 511) == 0) ph = std::polar(1.0, -lambda * h_ * static_cast<double>(k));
            const double w = 1.0 - std::abs(static_cast<double>(k)) / static_cast<double>(c);
            s += w * v_[static_cast<std::size_t>(k + K)] * ph;
            wsum += w;
            ph *= rot;
        }
        return s / wsum;
    }

private:
    std::vector<cplx> v_;
    double h_;
    std::size_t K_;
};

}  // namespace

LayerStripResult layer_strip(const Sampler& reflection, double x0, double x1, double zeta0,
                             double L, const NumericStripOptions& opt) {
    if (!(zeta0 > 0.0)) throw ArgumentError("zeta0 must be positive");
    const Interval X(x0, x1);
    if (!(L > 0.0)) throw ArgumentError("band L must be positive");
    const double h = std::numbers::pi / (opt.oversampling * X.length());
    const auto K = static_cast<std::size_t>(std::ceil(L / h));
    if (K > 50'000'000) throw ResourceError("frequency band needs too many samples");
    std::vector<cplx> vals(2 * K + 1);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double w = h * (static_cast<double>(i) - static_cast<double>(K));
        vals[i] = reflection(w);
    }
    Spectrum S(std::move(vals), h, K);
    const double Lw = S.window();
    const auto Kc = std::max<std::size_t>(8, static_cast<std::size_t>(static_cast<double>(K) / opt.coarse_ratio));
    const double Lc = h * static_cast<double>(Kc);

    const double dl = std::numbers::pi / (2.0 * Lc);
    // upper envelope of the normalized Fejer kernel over |k| <= kc at offset d
    auto envelope = [&](double d, std::size_t kc) {
        const double s = static_cast<double>(kc) * std::sin(0.5 * h * d);
        return std::min(1.0, 1.0 / (s * s));
    };
    constexpr double leakage_margin = 3.0;
    auto scan = [&](double span, std::size_t window) {
        const auto count = static_cast<std::size_t>(std::ceil(span / dl)) + 1;
        std::vector<double> mag(count);
        for (std::size_t i = 0; i < count; ++i)
            mag[i] = std::abs(S.fejer(static_cast<double>(i) * dl, window));
        return mag;
    };
    // full-window means are off every main lobe at almost all coarse nodes
    auto full = scan(2.0 * X.length(), K);
    std::nth_element(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(full.size() / 2),
                     full.end());
    const double floor_level = full[full.size() / 2];
    const double threshold = opt.threshold > 0.0 ? opt.threshold : 10.0 * floor_level;

    // tighten a coarse estimate with progressively longer windows, then golden section
    auto refine = [&](double lambda) {
        double half_width = 2.0 * dl;
        std::size_t kc = Kc;
        while (kc < K) {
            kc = std::min(K, 4 * kc);
            double best = lambda, best_mag = -1.0;
            for (int i = -16; i <= 16; ++i) {
                const double l = lambda + half_width * i / 16.0;
                const double v = std::abs(S.fejer(l, kc));
                if (v > best_mag) {
                    best_mag = v;
                    best = l;
                }
            }
            lambda = best;
            half_width = std::numbers::pi / (h * static_cast<double>(kc));
        }
        double a = lambda - half_width, b = lambda + half_width;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = std::abs(S.fejer(c, K)), fd = std::abs(S.fejer(d, K));
        for (int it = 0; it < 60 && (b - a) > 1e-9 / Lw; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = std::abs(S.fejer(c, K));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = std::abs(S.fejer(d, K));
            }
        }
        return 0.5 * (a + b);
    };

    std::vector<double> y, r;
    double offset = x0;
    bool complete = true;
    while (y.size() < opt.max_layers) {
        const double span = 2.0 * (x1 - offset);
        if (!(span > 0.0)) break;
        const auto mag = scan(span, Kc);
        std::vector<std::size_t> peaks;
        for (std::size_t i = 1; i < mag.size(); ++i) {
            const bool local = mag[i] >= mag[i - 1] && (i + 1 == mag.size() || mag[i] >= mag[i + 1]);
            if (local && mag[i] > threshold) peaks.push_back(i);
        }
        // strongest first: a maximum explained by the kernel tails of stronger ones is a sidelobe
        std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
        std::vector<std::size_t> sources;
        auto leakage = [&](double lambda, std::size_t kc, std::size_t skip) {
            double sum = 0.0;
            for (std::size_t s : sources) {
                if (s == skip) continue;
                sum += mag[s] * envelope(lambda - static_cast<double>(s) * dl, kc);
            }
            return sum;
        };
        for (std::size_t i : peaks)
            if (mag[i] > leakage_margin * leakage(static_cast<double>(i) * dl, Kc, i)) sources.push_back(i);
        auto order = sources;
        std::sort(order.begin(), order.end());

        double lambda = -1.0;
        for (std::size_t i : order) {
            const double l = refine(static_cast<double>(i) * dl);
            const double v = std::abs(S.fejer(l, K));
            if (l > 0.0 && v > threshold && v > leakage_margin * leakage(l, K, i)) {
                lambda = l;
                break;
            }
        }
        if (lambda < 0.0) break;
        const double rj = S.fejer(lambda, K).real();
        const double yj = offset + 0.5 * lambda;
        if (!(yj < x1) || !(std::abs(rj) < max_reflectivity)) {
            complete = false;
            break;
        }
        y.push_back(yj);
        r.push_back(rj);
        const auto Ki = static_cast<std::ptrdiff_t>(K);
        for (std::ptrdiff_t k = -Ki; k <= Ki; ++k) {
            const cplx u = std::polar(1.0, -lambda * h * static_cast<double>(k)) * S.at(k);
            S.at(k) = (u - rj) / (1.0 - rj * u);
        }
        offset = yj;
    }
    LayerStripResult out{assemble(X, zeta0, y, r)};
    out.residual = S.mean_power();
    out.noise_floor = floor_level;
    out.lambda_tolerance = std::numbers::pi / Lw;
    out.complete = complete && std::sqrt(out.residual) <= std::max(threshold, 1e-300) * 10.0;
    return out;
}

ShortRangeResult short_range_invert(const ReflectionSeries& series, double x0, double zeta0,
                                    double int_l1, double int_l2, double y, std::size_t order) {
    if (order == 0 || order > short_range_max_order)
        throw ArgumentError("short-range series order must lie in 1..6");
    if (!(zeta0 > 0.0)) throw ArgumentError("zeta0 must be positive");
    if (!(y > x0)) throw DomainError("y must exceed x0");
    ShortRangeResult out;
    out.order = order;
    const double th = std::tanh(int_l1);
    out.gamma = int_l2 > 0.0 ? (1.0 - th) * (1.0 - th) / (4.0 * int_l2)
                             : std::numeric_limits<double>::infinity();
    if (!(y < x0 + out.gamma)) throw DomainError("y lies outside the short-range interval");

    const double tau = 2.0 * series.delta;
    const double T = 2.0 * (y - x0);
    const auto M = static_cast<std::size_t>(std::floor(T / tau + 1e-9));
    if (M > series.size()) throw ArgumentError("data do not reach 2(y - x0)");
    if (M == 0) {
        out.zeta = zeta0;
        return out;
    }
    const auto m = moments_from_coefficients(std::span(series.a).first(M));
    // tau S(k tau) = -m_|k|; S is continuous at 0 and has no sample there
    auto kernel = [&](std::size_t k) { return -m[k == 0 ? 1 : k]; };
    // rectangles centred on the nodes, clipped to (0, T)
    std::vector<double> w(M + 1, 1.0);
    w[0] = 0.5;
    w[M] = 0.5 + (T - tau * static_cast<double>(M)) / tau;

    for (std::size_t i = 0; i <= M; ++i) {
        double row = 0.0;
        for (std::size_t k = 0; k <= M; ++k) row += std::abs(w[k] * kernel(i > k ? i - k : k - i));
        out.operator_norm = std::max(out.operator_norm, row);
    }
    std::vector<double> f(M + 1, 1.0), g(M + 1);
    double total = 0.0;
    for (std::size_t j = 1; j <= order; ++j) {
        for (std::size_t i = 0; i <= M; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k <= M; ++k) s += w[k] * kernel(i > k ? i - k : k - i) * f[k];
            g[i] = s;
        }
        std::swap(f, g);
        total += f[0];
        out.last_term = std::abs(f[0]);
    }
    out.zeta = zeta0 * (1.0 + total) * (1.0 + total);
    return out;
}

}  // namespace layerscatter

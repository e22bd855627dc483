#include "layerscatter/media.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "layerscatter/errors.hpp"

namespace layerscatter {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

bool same_value(double a, double b) {
    return std::abs(a - b) <= 4.0 * eps * std::max(std::abs(a), std::abs(b));
}

bool same_point(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(what) + " must be positive and finite");
}

double kind_value(const ProfileKind& kind, double x) {
    return std::visit(
        [x](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, profiles::Constant>) {
                return k.value;
            } else if constexpr (std::is_same_v<K, profiles::Exponential>) {
                return std::exp(-2.0 * k.alpha0 * x);
            } else if constexpr (std::is_same_v<K, profiles::Chirp>) {
                if (x < k.a || x >= k.b) return 1.0;
                const double u = k.d * (x - k.a) * (x - k.a);
                return std::exp(-2.0 * k.c * (k.b - x) * std::sin(u));
            } else {
                const auto n = k.log_zeta.size();
                double t = (x - k.x0) / k.h;
                auto i = static_cast<std::ptrdiff_t>(std::floor(t));
                i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 2);
                const double f = t - static_cast<double>(i);
                return std::exp((1.0 - f) * k.log_zeta[i] + f * k.log_zeta[i + 1]);
            }
        },
        kind);
}

double kind_alpha(const ProfileKind& kind, double x) {
    return std::visit(
        [x](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, profiles::Constant>) {
                return 0.0;
            } else if constexpr (std::is_same_v<K, profiles::Exponential>) {
                return k.alpha0;
            } else if constexpr (std::is_same_v<K, profiles::Chirp>) {
                if (x < k.a || x >= k.b) return 0.0;
                const double s = x - k.a;
                const double u = k.d * s * s;
                return -k.c * std::sin(u) + 2.0 * k.c * k.d * (k.b - x) * s * std::cos(u);
            } else {
                const auto& L = k.log_zeta;
                const auto n = static_cast<std::ptrdiff_t>(L.size());
                const double t = (x - k.x0) / k.h;
                const double r = std::round(t);
                if (std::abs(t - r) < 1e-9) {
                    auto i = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(r), 0, n - 1);
                    double slope;
                    if (i == 0)
                        slope = (L[1] - L[0]) / k.h;
                    else if (i == n - 1)
                        slope = (L[n - 1] - L[n - 2]) / k.h;
                    else
                        slope = (L[i + 1] - L[i - 1]) / (2.0 * k.h);
                    return -0.5 * slope;
                }
                auto i = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(t)), 0,
                                                    n - 2);
                return -0.5 * (L[i + 1] - L[i]) / k.h;
            }
        },
        kind);
}

ProfileKind kind_reciprocal(const ProfileKind& kind) {
    return std::visit(
        [](const auto& k) -> ProfileKind {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, profiles::Constant>) {
                return profiles::Constant{1.0 / k.value};
            } else if constexpr (std::is_same_v<K, profiles::Exponential>) {
                return profiles::Exponential{-k.alpha0};
            } else if constexpr (std::is_same_v<K, profiles::Chirp>) {
                auto c = k;
                c.c = -c.c;
                return c;
            } else {
                auto c = k;
                for (auto& v : c.log_zeta) v = -v;
                return c;
            }
        },
        kind);
}

void validate_kind(const ProfileKind& kind, const Interval& span) {
    if (const auto* c = std::get_if<profiles::Constant>(&kind)) check_positive(c->value, "constant");
    if (const auto* s = std::get_if<profiles::LogLinear>(&kind)) {
        if (s->log_zeta.size() < 2) throw ArgumentError("sampled profile needs at least 2 samples");
        if (!(s->h > 0.0)) throw ArgumentError("sample spacing must be positive");
        for (double v : s->log_zeta)
            if (!std::isfinite(v)) throw DomainError("samples must be positive and finite");
        const double last = s->x0 + s->h * static_cast<double>(s->log_zeta.size() - 1);
        const double tol = 1e-9 * std::max(1.0, std::abs(span.length()));
        if (span.x0 < s->x0 - tol || span.x1 > last + tol)
            throw ArgumentError("samples do not cover the profile interval");
    }
}

template <class F>
double integrate(const ImpedanceProfile& p, F f) {
    using boost::math::quadrature::gauss;
    double total = 0.0;
    for (const auto& piece : p.pieces()) {
        std::vector<double> cuts{piece.span.x0, piece.span.x1};
        if (const auto* c = std::get_if<profiles::Chirp>(&piece.kind)) {
            for (double x : {c->a, c->b})
                if (x > piece.span.x0 && x < piece.span.x1) cuts.push_back(x);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            constexpr int panels = 512;
            const double w = (cuts[i + 1] - cuts[i]) / panels;
            for (int k = 0; k < panels; ++k) {
                const double a = cuts[i] + k * w;
                total += gauss<double, 15>::integrate(
                    [&](double x) { return f(kind_alpha(piece.kind, x)); }, a, a + w);
            }
        }
    }
    return total;
}

}  // namespace

Interval::Interval(double a, double b) : x0(a), x1(b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
        throw ArgumentError("interval requires finite x0 < x1");
}

double Sampled::operator()(double x) const {
    const auto n = values.size();
    if (n == 0) throw ArgumentError("empty sample set");
    if (n == 1) return values[0];
    const double t = (x - x0) / h;
    if (t <= 0.0) return values.front();
    if (t >= static_cast<double>(n - 1)) return values.back();
    const auto i = static_cast<std::size_t>(t);
    const double f = t - static_cast<double>(i);
    return (1.0 - f) * values[i] + f * values[std::min(i + 1, n - 1)];
}

Sampled Sampled::from(const std::function<double(double)>& f, double a, double b,
                      std::size_t intervals) {
    if (intervals == 0) throw ArgumentError("need at least one interval");
    Sampled s;
    s.x0 = a;
    s.h = (b - a) / static_cast<double>(intervals);
    s.values.resize(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k)
        s.values[k] = f(k == intervals ? b : a + static_cast<double>(k) * s.h);
    return s;
}

double reflectivity(double left, double right) {
    check_positive(left, "impedance");
    check_positive(right, "impedance");
    return (left - right) / (left + right);
}

StepMedium::StepMedium(Interval span, std::vector<double> jumps, std::vector<double> values)
    : span_(span), jumps_(std::move(jumps)), values_(std::move(values)) {
    if (values_.size() != jumps_.size() + 1)
        throw ArgumentError("step medium needs one more value than jumps");
    for (double v : values_) check_positive(v, "layer value");
    for (std::size_t j = 0; j < jumps_.size(); ++j) {
        const double y = jumps_[j];
        if (!(y > span_.x0 && y < span_.x1)) throw ArgumentError("jump outside the interval");
        if (j > 0 && !(y > jumps_[j - 1])) throw ArgumentError("jumps must increase strictly");
        if (values_[j] == values_[j + 1]) throw ArgumentError("removable jump in step medium");
        if (std::abs(reflectivity(values_[j], values_[j + 1])) >= max_reflectivity)
            throw DomainError("reflectivity too close to 1");
    }
}

StepMedium StepMedium::constant(Interval span, double value) {
    return StepMedium(span, {}, {value});
}

std::vector<double> StepMedium::reflectivities() const {
    std::vector<double> r(jumps_.size());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = reflectivity(values_[j], values_[j + 1]);
    return r;
}

double StepMedium::operator()(double x) const {
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x);
    return values_[static_cast<std::size_t>(it - jumps_.begin())];
}

double StepMedium::log_variation() const {
    double v = 0.0;
    for (std::size_t j = 0; j < jumps_.size(); ++j)
        v += 0.5 * std::abs(std::log(values_[j] / values_[j + 1]));
    return v;
}

StepMedium StepMedium::reciprocal() const {
    auto v = values_;
    for (auto& c : v) c = 1.0 / c;
    return StepMedium(span_, jumps_, std::move(v));
}

StepMedium StepMedium::scaled(double s) const {
    check_positive(s, "scale");
    auto v = values_;
    for (auto& c : v) c *= s;
    return StepMedium(span_, jumps_, std::move(v));
}

ImpedanceProfile::ImpedanceProfile(Interval span, ProfileKind kind, double scale)
    : ImpedanceProfile(std::vector<Piece>{Piece{span, std::move(kind), scale}}) {}

ImpedanceProfile::ImpedanceProfile(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw ArgumentError("profile needs at least one piece");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        check_positive(p.scale, "scale");
        validate_kind(p.kind, p.span);
        if (i > 0 && !same_point(pieces_[i - 1].span.x1, p.span.x0))
            throw ArgumentError("profile pieces must be adjacent");
    }
    span_ = Interval(pieces_.front().span.x0, pieces_.back().span.x1);
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        const double x = pieces_[i + 1].span.x0;
        const double l = pieces_[i].scale * kind_value(pieces_[i].kind, x);
        const double r = pieces_[i + 1].scale * kind_value(pieces_[i + 1].kind, x);
        check_positive(l, "impedance");
        check_positive(r, "impedance");
        if (!same_value(l, r)) {
            if (std::abs(reflectivity(l, r)) >= max_reflectivity)
                throw DomainError("reflectivity too close to 1");
            jumps_.push_back({x, l, r});
        }
    }
}

ImpedanceProfile ImpedanceProfile::from_samples(Interval span, std::span<const double> zeta) {
    if (zeta.size() < 2) throw ArgumentError("sampled profile needs at least 2 samples");
    profiles::LogLinear s;
    s.x0 = span.x0;
    s.h = span.length() / static_cast<double>(zeta.size() - 1);
    s.log_zeta.reserve(zeta.size());
    for (double z : zeta) {
        check_positive(z, "sample");
        s.log_zeta.push_back(std::log(z));
    }
    return ImpedanceProfile(span, std::move(s));
}

ImpedanceProfile ImpedanceProfile::from_step(const StepMedium& m) {
    std::vector<Piece> pieces;
    const auto& y = m.jumps();
    for (std::size_t j = 0; j <= y.size(); ++j) {
        const double a = j == 0 ? m.interval().x0 : y[j - 1];
        const double b = j == y.size() ? m.interval().x1 : y[j];
        pieces.push_back({Interval(a, b), profiles::Constant{m.values()[j]}, 1.0});
    }
    return ImpedanceProfile(std::move(pieces));
}

const Piece& ImpedanceProfile::piece_at(double x) const {
    for (const auto& p : pieces_)
        if (x < p.span.x1) return p;
    return pieces_.back();
}

double ImpedanceProfile::operator()(double x) const {
    const auto& p = piece_at(x);
    return p.scale * kind_value(p.kind, x);
}

double ImpedanceProfile::left_limit(double x) const {
    for (const auto& d : jumps_)
        if (same_point(d.x, x)) return d.left;
    return (*this)(x);
}

double ImpedanceProfile::right_limit(double x) const {
    for (const auto& d : jumps_)
        if (same_point(d.x, x)) return d.right;
    return (*this)(x);
}

double ImpedanceProfile::alpha(double x) const {
    for (const auto& d : jumps_)
        if (same_point(d.x, x)) throw DomainError("alpha is undefined at a jump");
    return kind_alpha(piece_at(x).kind, x);
}

ImpedanceProfile ImpedanceProfile::reciprocal() const {
    auto pieces = pieces_;
    for (auto& p : pieces) {
        p.kind = kind_reciprocal(p.kind);
        p.scale = 1.0 / p.scale;
    }
    return ImpedanceProfile(std::move(pieces));
}

ImpedanceProfile ImpedanceProfile::scaled(double s) const {
    check_positive(s, "scale");
    auto pieces = pieces_;
    for (auto& p : pieces) p.scale *= s;
    return ImpedanceProfile(std::move(pieces));
}

ImpedanceProfile ImpedanceProfile::restricted(Interval sub) const {
    const double tol = 1e-12 * std::max(1.0, span_.length());
    if (sub.x0 < span_.x0 - tol || sub.x1 > span_.x1 + tol)
        throw ArgumentError("restriction outside the profile interval");
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
        const double a = std::max(p.span.x0, sub.x0);
        const double b = std::min(p.span.x1, sub.x1);
        if (b - a > tol) out.push_back({Interval(a, b), p.kind, p.scale});
    }
    out.front().span.x0 = sub.x0;
    out.back().span.x1 = sub.x1;
    return ImpedanceProfile(std::move(out));
}

double alpha_of(const ImpedanceProfile& p, double x) {
    if (!p.interval().contains(x)) throw DomainError("x outside the profile interval");
    return p.alpha(x);
}

double alpha_l1(const ImpedanceProfile& p) {
    return integrate(p, [](double a) { return std::abs(a); });
}

double alpha_l2sq(const ImpedanceProfile& p) {
    return integrate(p, [](double a) { return a * a; });
}

double StandardApproximant::jump(std::size_t j) const {
    return x0() + static_cast<double>(j) * delta;
}

std::vector<double> StandardApproximant::jumps() const {
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j] = jump(j + 1);
    return y;
}

std::vector<double> StandardApproximant::layer_values() const {
    std::vector<double> v(n + 1);
    for (std::size_t j = 0; j <= n; ++j) v[j] = source(jump(j) + 0.5 * delta);
    return v;
}

StepMedium StandardApproximant::medium() const {
    const auto v = layer_values();
    std::vector<double> y;
    std::vector<double> c{v[0]};
    for (std::size_t j = 1; j <= n; ++j) {
        if (v[j] == c.back()) continue;
        y.push_back(jump(j));
        c.push_back(v[j]);
    }
    return StepMedium(source.interval(), std::move(y), std::move(c));
}

StandardApproximant standard_approximant(const ImpedanceProfile& profile, std::size_t n) {
    if (n == 0) throw ArgumentError("standard approximant needs n >= 1");
    if (!profile.continuous()) throw ArgumentError("standard approximant needs a continuous profile");
    const auto& X = profile.interval();
    StandardApproximant s{profile, n, X.length() / static_cast<double>(n + 1), {}};
    s.reflectivities.resize(n);
    for (std::size_t j = 1; j <= n; ++j) {
        const double y = s.jump(j);
        const double r = reflectivity(profile(y - 0.5 * s.delta), profile(y + 0.5 * s.delta));
        if (std::abs(r) >= max_reflectivity) throw DomainError("reflectivity too close to 1");
        s.reflectivities[j - 1] = r;
    }
    return s;
}

std::vector<double> potential_from_samples(std::span<const double> zeta, double h) {
    const auto n = zeta.size();
    if (n < 3) throw ArgumentError("potential needs at least 3 grid points");
    if (!(h > 0.0)) throw ArgumentError("grid spacing must be positive");
    std::vector<double> s(n), q(n);
    for (std::size_t j = 0; j < n; ++j) {
        check_positive(zeta[j], "impedance sample");
        s[j] = std::sqrt(zeta[j]);
    }
    const double h2 = h * h;
    for (std::size_t j = 1; j + 1 < n; ++j) q[j] = ((s[j + 1] - s[j]) - (s[j] - s[j - 1])) / (h2 * s[j]);
    if (n >= 4) {
        // 2 s0 - 5 s1 + 4 s2 - s3 in difference form, exact on constants
        auto edge = [](double a, double b, double c, double d) {
            return 2.0 * (a - b) - 3.0 * (b - c) + (c - d);
        };
        q[0] = edge(s[0], s[1], s[2], s[3]) / (h2 * s[0]);
        q[n - 1] = edge(s[n - 1], s[n - 2], s[n - 3], s[n - 4]) / (h2 * s[n - 1]);
    } else {
        q[0] = (s[0] - 2.0 * s[1] + s[2]) / (h2 * s[0]);
        q[2] = (s[0] - 2.0 * s[1] + s[2]) / (h2 * s[2]);
    }
    return q;
}

Sampled potential_of(const ImpedanceProfile& profile, double h) {
    if (!(h > 0.0)) throw ArgumentError("grid spacing must be positive");
    const auto& X = profile.interval();
    const auto steps = static_cast<std::size_t>(std::floor(X.length() / h + 1e-9));
    if (steps < 2) throw ArgumentError("potential needs at least 3 grid points");
    std::vector<double> z(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) z[j] = profile(X.x0 + static_cast<double>(j) * h);
    return Sampled{X.x0, h, potential_from_samples(z, h)};
}

StepMedium concatenate(const StepMedium& m1, const StepMedium& m2) {
    if (!same_point(m1.interval().x1, m2.interval().x0))
        throw ArgumentError("media are not adjacent");
    auto y = m1.jumps();
    auto c = m1.values();
    if (m2.values().front() != c.back()) {
        y.push_back(m2.interval().x0);
        c.push_back(m2.values().front());
    }
    y.insert(y.end(), m2.jumps().begin(), m2.jumps().end());
    c.insert(c.end(), m2.values().begin() + 1, m2.values().end());
    return StepMedium(Interval(m1.interval().x0, m2.interval().x1), std::move(y), std::move(c));
}

ImpedanceProfile concatenate(const ImpedanceProfile& p1, const ImpedanceProfile& p2) {
    if (!same_point(p1.interval().x1, p2.interval().x0))
        throw ArgumentError("profiles are not adjacent");
    auto pieces = p1.pieces();
    pieces.insert(pieces.end(), p2.pieces().begin(), p2.pieces().end());
    return ImpedanceProfile(std::move(pieces));
}

std::pair<ImpedanceProfile, StepMedium> factor(const ImpedanceProfile& p) {
    const auto& d = p.discontinuities();
    std::vector<double> y, c{1.0};
    for (const auto& j : d) {
        y.push_back(j.x);
        c.push_back(c.back() * (j.right / j.left));
    }
    auto pieces = p.pieces();
    std::size_t layer = 0;
    for (auto& piece : pieces) {
        while (layer < y.size() && y[layer] <= piece.span.x0 + 1e-12 * std::max(1.0, std::abs(y[layer])))
            ++layer;
        piece.scale /= c[layer];
    }
    return {ImpedanceProfile(std::move(pieces)), StepMedium(p.interval(), std::move(y), std::move(c))};
}

}  // namespace layerscatter

#include "layerscatter/opuc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "layerscatter/errors.hpp"
#include "layerscatter/media.hpp"

namespace layerscatter {

namespace {

void check_verblunsky(std::span<const double> r) {
    for (double v : r)
        if (!(std::abs(v) < max_reflectivity))
            throw DomainError("Verblunsky coefficients must lie in (-1, 1)");
}

// one step of the pair recursion: out_k = in_{k-1} + s in_{j-k}
void step(const std::vector<double>& in, std::vector<double>& out, std::size_t j, double s) {
    for (std::size_t k = 0; k <= j + 1; ++k) {
        const double shifted = k == 0 ? 0.0 : in[k - 1];
        const double reversed = k <= j ? in[j - k] : 0.0;
        out[k] = shifted + s * reversed;
    }
}

}  // namespace

OpucQuartet opuc_recursion(std::span<const double> r) {
    check_verblunsky(r);
    const std::size_t n = r.size();
    std::vector<double> phi(n + 1, 0.0), psi(n + 1, 0.0), tphi(n + 1, 0.0), tpsi(n + 1, 0.0);
    phi[0] = psi[0] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        step(phi, tphi, j, -r[j]);
        step(psi, tpsi, j, r[j]);
        std::swap(phi, tphi);
        std::swap(psi, tpsi);
    }
    OpucQuartet q;
    q.n = n;
    q.phi = std::move(phi);
    q.psi = std::move(psi);
    q.phi_star.assign(q.phi.rbegin(), q.phi.rend());
    q.psi_star.assign(q.psi.rbegin(), q.psi.rend());
    return q;
}

std::complex<double> horner(std::span<const double> c, std::complex<double> z) {
    std::complex<double> acc(0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::complex<double> opuc_reflection(const OpucQuartet& q, double delta, double omega) {
    if (!(delta > 0.0)) throw ArgumentError("delta must be positive");
    const auto z = std::polar(1.0, 2.0 * delta * omega);
    const auto ps = horner(q.psi_star, z);
    const auto fs = horner(q.phi_star, z);
    return (ps - fs) / (ps + fs);
}

std::complex<double> opuc_reflection(std::span<const double> r, double delta, double omega) {
    return opuc_reflection(opuc_recursion(r), delta, omega);
}

SzegoResult szego_sum(std::span<const double> r, double delta, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    if (!(delta > 0.0)) throw ArgumentError("delta must be positive");
    SzegoResult out;
    for (double v : r) out.rhs -= std::log1p(-v * v);
    if (r.empty()) return out;

    // In theta = 2 delta omega the integral is the mean over one period. R is
    // built from the inside out, xi_j = e^{i theta} (xi_{j+1} + r_j) / (1 + r_j xi_{j+1}),
    // and each step multiplies 1 - |xi|^2 by (1 - r_j^2) / |1 + r_j xi_{j+1}|^2, so
    // -log(1 - |R|^2) is accumulated without the cancellation of 1 - |R|^2.
    auto integrand = [&](double theta) {
        const auto z = std::polar(1.0, theta);
        std::complex<double> xi(0.0);
        double acc = 0.0;
        for (std::size_t j = r.size(); j-- > 0;) {
            const auto den = 1.0 + r[j] * xi;
            acc += 2.0 * std::log(std::abs(den)) - std::log1p(-r[j] * r[j]);
            xi = z * (xi + r[j]) / den;
        }
        return acc;
    };
    // Global adaptive Gauss-Kronrod: always bisect the panel with the largest error
    // estimate, so the spikes where |R| nears 1 are refined locally.
    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    constexpr std::size_t rule = 21;
    constexpr std::size_t cap = std::size_t{1} << 20;
    auto panel = [&](double a, double b) {
        double e = 0.0;
        const double v = gauss_kronrod<double, rule>::integrate(integrand, a, b, 0, 0.0, &e);
        return Panel{a, b, v, e};
    };
    std::priority_queue<Panel> heap;
    double sum = 0.0, err = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double w = 2.0 * std::numbers::pi / 16.0;
        const auto p = panel(-std::numbers::pi + k * w, -std::numbers::pi + (k + 1) * w);
        sum += p.value;
        err += p.error;
        heap.push(p);
    }
    out.nodes = 16 * rule;
    while (err > rel_tol * std::abs(sum) && out.nodes + 2 * rule <= cap) {
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = panel(worst.a, mid), right = panel(mid, worst.b);
        sum += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        out.nodes += 2 * rule;
    }
    // re-add to shed the drift of the running updates
    sum = err = 0.0;
    for (; !heap.empty(); heap.pop()) {
        sum += heap.top().value;
        err += heap.top().error;
    }
    out.lhs = sum / (2.0 * std::numbers::pi);
    out.achieved = err / std::max(std::abs(sum), 1e-300);
    if (!(out.achieved <= rel_tol))
        throw NumericError("Szego quadrature did not converge", out.achieved);
    return out;
}

double inner_with_one(std::span<const double> p, std::span<const double> m) {
    if (p.size() > m.size()) throw ArgumentError("more coefficients than moments");
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * m[k];
    return s;
}

}  // namespace layerscatter

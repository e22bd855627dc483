#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "layerscatter/layerscatter.hpp"
#include "oracles.hpp"

using namespace layerscatter;

namespace {

// RK4 on E' = alpha e^{2i(x-x0)w} conj(E), E(x0) = 1
cplx ode_harmonic(const RealFn& alpha, double x0, double y, double w, int steps = 20000) {
    auto f = [&](double x, cplx e) { return alpha(x) * std::polar(1.0, 2.0 * (x - x0) * w) * std::conj(e); };
    const double h = (y - x0) / steps;
    cplx e(1.0);
    for (int k = 0; k < steps; ++k) {
        const double x = x0 + k * h;
        const cplx k1 = f(x, e), k2 = f(x + h / 2, e + h / 2 * k1), k3 = f(x + h / 2, e + h / 2 * k2),
                   k4 = f(x + h, e + h * k3);
        e += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return e;
}

double bump(double x) { return 0.8 * std::sin(1.3 * x) * std::exp(-0.2 * x); }

}  // namespace

TEST_CASE("singular harmonic") {
    const Interval X(0.0, 3.0);
    for (double w : {0.0, 0.4, -9.0})
        CHECK(std::abs(singular_harmonic(StepMedium::constant(X, 2.0), 3.0, w) - 1.0) < 1e-15);
    const StepMedium one(X, {1.1}, {1.0, 0.6});
    const double r = one.reflectivities()[0];
    for (double w : {0.0, 0.4, -9.0}) {
        CHECK(std::abs(singular_harmonic(one, 2.0, w) - (1.0 + r * std::polar(1.0, 2.2 * w))) < 1e-15);
        CHECK(std::abs(singular_harmonic(one, 1.0, w) - 1.0) < 1e-15);
    }
    CHECK_THROWS_AS(singular_harmonic(one, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(singular_harmonic(one, 3.5, 1.0), DomainError);

    // equally spaced jumps: Psi*_n and Phi*_n of the reflectivities
    std::mt19937_64 rng(21);
    const double delta = 0.25;
    const auto rr = oracle::uniform(rng, 11, -0.8, 0.8);
    std::vector<double> y, c{1.0};
    for (std::size_t j = 0; j < rr.size(); ++j) {
        y.push_back(delta * (j + 1));
        c.push_back(c.back() * (1 - rr[j]) / (1 + rr[j]));
    }
    const StepMedium m(Interval(0.0, delta * (rr.size() + 1)), y, c);
    const auto p = opuc_recursion(rr);
    for (double w : {0.0, 0.7, 3.1, -2.0}) {
        const auto z = std::polar(1.0, 2.0 * delta * w);
        const double top = m.interval().x1;
        CHECK(std::abs(singular_harmonic(m, top, w) - horner(p.psi_star, z)) < 1e-12);
        CHECK(std::abs(singular_harmonic(m.reciprocal(), top, w) - horner(p.phi_star, z)) < 1e-12);
    }

    // brute force over ordered subsets: each chain of jumps contributes prod r times the
    // alternating phase exp(i w kappa)
    const std::vector<double> ys{0.3, 0.9, 1.4, 2.2, 2.7};
    const auto rs = oracle::uniform(rng, ys.size(), -0.7, 0.7);
    for (double w : {0.0, 1.7, -4.2}) {
        cplx sum(1.0);
        for (unsigned mask = 1; mask < (1u << ys.size()); ++mask) {
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < ys.size(); ++j)
                if (mask & (1u << j)) idx.push_back(j);
            // kappa(s_1..s_k) = 2 sum (-1)^{k-nu} s_nu with s_nu increasing
            double kappa = 0.0, prod = 1.0;
            const std::size_t k = idx.size();
            for (std::size_t nu = 0; nu < k; ++nu) {
                kappa += ((k - 1 - nu) % 2 ? -2.0 : 2.0) * ys[idx[nu]];
                prod *= rs[idx[nu]];
            }
            sum += prod * std::polar(1.0, kappa * w);
        }
        CHECK(std::abs(singular_harmonic(0.0, ys, rs, 3.0, w) - sum) < 1e-13);
    }
}

TEST_CASE("harmonic exponential") {
    const auto zero = harmonic_exponential([](double) { return 0.0; }, 0.0, 2.0, 3.0);
    CHECK(std::abs(zero.value - 1.0) < 1e-15);
    CHECK(zero.within_tolerance);

    const double a0 = 0.3;
    const auto c = harmonic_exponential([&](double) { return a0; }, 1.0, 3.5, 0.0);
    CHECK(std::abs(c.value - std::exp(a0 * 2.5)) < 1e-12);

    // omega = 0 gives sqrt(zeta(x0)/zeta(y))
    const ImpedanceProfile chirp(Interval(0.0, 15.0), profiles::Chirp{});
    const auto e0 = harmonic_exponential([&](double x) { return chirp.alpha(x); }, 0.0, 12.0, 0.0);
    CHECK(std::abs(e0.value - std::sqrt(chirp(0.0) / chirp(12.0))) < 1e-6);

    for (double w : {0.0, 0.5, 2.0, -3.0}) {
        const auto h = harmonic_exponential(bump, 0.0, 6.0, w);
        CHECK(std::abs(h.value - ode_harmonic(bump, 0.0, 6.0, w)) < 1e-9);
    }

    HarmonicConfig tight;
    tight.truncation = 2;
    const auto cut = harmonic_exponential(bump, 0.0, 6.0, 1.0, tight);
    CHECK_FALSE(cut.within_tolerance);
    CHECK(cut.tail_bound > tight.tolerance);
    CHECK_THROWS(harmonic_exponential(bump, 1.0, 1.0, 1.0));
    HarmonicConfig bad;
    bad.quad_points = 1;
    CHECK_THROWS_AS(harmonic_exponential(bump, 0.0, 1.0, 1.0, bad), ArgumentError);

    const auto s = Sampled::from(bump, 0.0, 6.0, 6000);
    CHECK(std::abs(harmonic_exponential(s, 6.0, 1.0).value - harmonic_exponential(bump, 0.0, 6.0, 1.0).value) < 1e-6);
}

TEST_CASE("harmonic properties") {
    std::mt19937_64 rng(31);
    double l1 = 0.0;
    for (int k = 0; k < 6000; ++k) l1 += std::abs(bump((k + 0.5) * 1e-3)) * 1e-3;
    for (double w : oracle::uniform(rng, 50, -20.0, 20.0)) {
        const auto p = harmonic_pair(bump, 0.0, 6.0, w);
        CHECK(std::abs(std::real(p.plus * std::conj(p.minus)) - 1.0) < 1e-9);
        CHECK(std::abs(p.plus) <= std::exp(l1) * (1.0 + 1e-9));
        CHECK(std::abs(p.minus) <= std::exp(l1) * (1.0 + 1e-9));
        const auto t = hyperbolic_tangent(bump, 0.0, 6.0, w);
        const auto tm = hyperbolic_tangent([](double x) { return -bump(x); }, 0.0, 6.0, w);
        CHECK(std::abs(t.value + tm.value) < 1e-12);
        CHECK(std::abs(t.value) <= std::tanh(l1) * (1.0 + 1e-9));
    }
    HarmonicConfig fine;
    fine.quad_points = 40001;
    const double far = std::abs(harmonic_exponential(bump, 0.0, 6.0, 1e3, fine).value - 1.0);
    const double near = std::abs(harmonic_exponential(bump, 0.0, 6.0, 1e2, fine).value - 1.0);
    CHECK(far < 10.0 * near);
}

TEST_CASE("hyperbolic tangent") {
    CHECK(std::abs(hyperbolic_tangent([](double) { return 0.0; }, 0.0, 1.0, 2.0).value) < 1e-15);
    for (double a0 : {0.1, 0.5, -1.2})
        CHECK(std::abs(hyperbolic_tangent([&](double) { return a0; }, 0.0, 1.0, 0.0).value - std::tanh(a0)) < 1e-12);

    // reflection of the exponential profile against its step approximants; alpha does not vanish
    // at the ends, so the staircase converges at first order and is extrapolated
    const ImpedanceProfile ex(Interval(0.0, 2.0), profiles::Exponential{0.4});
    std::vector<double> w;
    for (int i = 0; i < 40; ++i) w.push_back(-8.0 + 16.0 * (i + 0.5) / 40.0);
    const auto R1 = spectrum(standard_approximant(ex, 8000), w);
    const auto R2 = spectrum(standard_approximant(ex, 16000), w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto t = hyperbolic_tangent([&](double x) { return ex.alpha(x); }, 0.0, 2.0, w[i]);
        CHECK(std::abs(t.value - (2.0 * R2[i] - R1[i])) < 2e-6);
        CHECK(std::abs(t.value - R2[i]) < 1e-4);
    }
}

TEST_CASE("singular approximation gap") {
    const ImpedanceProfile flat(Interval(0.0, 5.0), profiles::Constant{2.0});
    for (std::size_t n : {1u, 10u, 100u}) CHECK(singular_approximation_gap(flat, 5.0, 1.0, n) < 1e-14);

    const ImpedanceProfile chirp(Interval(0.0, 15.0), profiles::Chirp{});
    const double g50 = singular_approximation_gap(chirp, 15.0, 1.0, 50);
    const double g400 = singular_approximation_gap(chirp, 15.0, 1.0, 400);
    CHECK(g400 * 4.0 <= g50);

    // exponential profile at omega = 0: the step product against e^{alpha0 L}
    const double a0 = 0.2, L = 3.0;
    const ImpedanceProfile ex(Interval(0.0, L), profiles::Exponential{a0});
    for (std::size_t n : {5u, 40u}) {
        const auto s = standard_approximant(ex, n);
        cplx e(1.0);
        for (double r : s.reflectivities) e += r * std::conj(e);
        CHECK(singular_approximation_gap(ex, L, 0.0, n) == doctest::Approx(std::abs(e - std::exp(a0 * L))).epsilon(1e-9));
    }
}

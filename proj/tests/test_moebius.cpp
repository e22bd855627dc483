#include <doctest.h>

#include <cmath>
#include <random>

#include "layerscatter/layerscatter.hpp"
#include "oracles.hpp"

using namespace layerscatter;

namespace {

std::mt19937_64 rng(11);

cplx random_disk(double radius = 0.95) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

cplx random_phase() {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    return std::polar(1.0, u(rng));
}

Auto random_auto() { return {random_phase(), random_disk(0.9)}; }

}  // namespace

TEST_CASE("apply") {
    for (int k = 0; k < 100; ++k) {
        const cplx xi = random_disk(1.0);
        CHECK(std::abs(layerscatter::apply(identity_map(), xi) - xi) < 1e-15);
    }
    CHECK(std::abs(layerscatter::apply(make_auto(1.0, 0.3), 0.0) - 0.3) < 1e-15);
    CHECK_THROWS_AS(layerscatter::apply(identity_map(), cplx(1.1, 0.0)), DomainError);
    CHECK_THROWS(make_auto(cplx(2.0, 0.0), 0.0));
    CHECK_THROWS(make_auto(1.0, 1.0));
    CHECK(std::abs(layerscatter::apply(make_constant(cplx(0.0, 1.0)), 0.4) - cplx(0.0, 1.0)) < 1e-15);

    for (int k = 0; k < 1000; ++k) {
        const auto f = random_auto();
        const cplx xi = random_disk(1.0);
        const cplx direct = f.mu * (xi + f.rho) / (1.0 + std::conj(f.rho) * xi);
        CHECK(std::abs(layerscatter::apply(f, xi) - direct) < 1e-12);
        CHECK(std::abs(HomogMatrix::of(f).project(xi) - direct) < 1e-12);
        CHECK(std::abs(layerscatter::apply(f, xi)) <= 1.0 + 1e-12);
        const auto M = HomogMatrix::of(f);
        CHECK(std::abs(M.det() - f.mu * (1.0 - std::norm(f.rho))) < 1e-12);
    }
}

TEST_CASE("compose") {
    const cplx mu = std::polar(1.0, 0.7);
    const double r = -0.35;
    const auto g = std::get<Auto>(compose(make_auto(mu, 0.0), make_auto(1.0, r)));
    CHECK(std::abs(g.mu - mu) < 1e-15);
    CHECK(std::abs(g.rho - r) < 1e-15);

    for (int k = 0; k < 100; ++k) {
        const DiskMap f = random_auto(), h = random_auto(), e = random_auto();
        const auto fi = std::get<Auto>(compose(f, identity_map()));
        CHECK(std::abs(fi.mu - std::get<Auto>(f).mu) < 1e-14);
        CHECK(std::abs(fi.rho - std::get<Auto>(f).rho) < 1e-14);
        const auto fh = compose(f, h);
        CHECK(std::holds_alternative<Auto>(fh));
        const auto M = (HomogMatrix::of(std::get<Auto>(f)) * HomogMatrix::of(std::get<Auto>(h))).normalize();
        const auto left = compose(compose(f, h), e), right = compose(f, compose(h, e));
        for (int j = 0; j < 100; ++j) {
            const cplx xi = random_disk();
            const cplx ref = layerscatter::apply(f, layerscatter::apply(h, xi));
            CHECK(std::abs(layerscatter::apply(fh, xi) - ref) < 1e-12);
            CHECK(std::abs(M.project(xi) - ref) < 1e-12);
            CHECK(std::abs(layerscatter::apply(left, xi) - layerscatter::apply(right, xi)) < 1e-10);
        }
    }
    const DiskMap c = make_constant(std::polar(1.0, 0.2));
    CHECK(std::holds_alternative<Constant>(compose(c, random_auto())));
    CHECK(std::holds_alternative<Constant>(compose(random_auto(), c)));
    const DiskMap f = random_auto();
    CHECK(std::abs(layerscatter::apply(compose(f, c), 0.0) - layerscatter::apply(f, std::polar(1.0, 0.2))) < 1e-12);
}

TEST_CASE("invert") {
    const auto id = std::get<Auto>(invert(identity_map()));
    CHECK(std::abs(id.mu - 1.0) < 1e-15);
    CHECK(std::abs(id.rho) < 1e-15);
    const auto f = random_auto();
    const auto fi = std::get<Auto>(invert(f));
    CHECK(std::abs(fi.mu - std::conj(f.mu)) < 1e-15);
    CHECK(std::abs(fi.rho + f.mu * f.rho) < 1e-15);
    for (int k = 0; k < 1000; ++k) {
        const DiskMap g = random_auto();
        const cplx xi = random_disk(1.0);
        CHECK(std::abs(layerscatter::apply(invert(g), layerscatter::apply(g, xi)) - xi) < 1e-12);
        CHECK(std::abs(layerscatter::apply(compose(g, invert(g)), xi) - xi) < 1e-12);
    }
    CHECK_THROWS_AS(invert(make_constant(1.0)), NotInvertibleError);
}

TEST_CASE("step reflection") {
    const Interval X(0.5, 2.0);
    for (double w : {0.0, 0.3, -4.0}) {
        const auto g = step_reflection_map(StepMedium::constant(X, 3.0), w);
        const cplx xi = random_disk();
        CHECK(std::abs(layerscatter::apply(g, xi) - std::polar(1.0, 2.0 * 1.5 * w) * xi) < 1e-14);
        CHECK(std::abs(step_reflection(StepMedium::constant(X, 3.0), w)) == 0.0);
    }
    const StepMedium one(X, {1.2}, {1.0, 0.25});
    const double r1 = one.reflectivities()[0];
    for (double w : {0.0, 1.0, 7.3})
        CHECK(std::abs(step_reflection(one, w) - r1 * std::polar(1.0, 2.0 * 0.7 * w)) < 1e-14);

    // random media against brute composition; reciprocal and scale symmetries; the variation bound
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 1 + k * 10;
        auto y = oracle::uniform(rng, n, 0.0, 1.0);
        std::sort(y.begin(), y.end());
        std::vector<double> c{1.0};
        for (double r : oracle::uniform(rng, n, -0.6, 0.6)) c.push_back(c.back() * (1 - r) / (1 + r));
        const StepMedium m(Interval(-0.1, 1.1), y, c);
        const double bound = std::tanh(m.log_variation());
        for (int j = 0; j < 10; ++j) {
            const double w = std::uniform_real_distribution<double>(-30.0, 30.0)(rng);
            const cplx R = step_reflection(m, w);
            const cplx ref = oracle::layered(-0.1, 1.1, y, m.reflectivities(), w);
            CHECK(std::abs(R - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
            CHECK(std::abs(R) <= bound * (1.0 + 1e-12));
            CHECK(std::abs(step_reflection(m.reciprocal(), w) + R) < 1e-12);
            CHECK(std::abs(step_reflection(m.scaled(0.37), w) - R) < 1e-12);
            CHECK(std::abs(layerscatter::apply(step_reflection_map(m, w), 0.0) - R) < 1e-12);
        }
    }
}

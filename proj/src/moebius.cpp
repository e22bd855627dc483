#include "layerscatter/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "layerscatter/errors.hpp"

namespace layerscatter {

namespace {

constexpr double disk_slack = 4.0 * std::numeric_limits<double>::epsilon();

cplx phase(double theta) { return std::polar(1.0, theta); }

}  // namespace

double HomogMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : e) m = std::max(m, std::abs(z));
    return m;
}

HomogMatrix& HomogMatrix::normalize() {
    const double m = max_abs();
    if (m > 0.0)
        for (auto& z : e) z /= m;
    return *this;
}

HomogMatrix HomogMatrix::of(const Auto& f) {
    HomogMatrix m;
    m.e = {f.mu, f.mu * f.rho, std::conj(f.rho), cplx(1.0)};
    return m;
}

HomogMatrix HomogMatrix::diag(cplx a, cplx d) {
    HomogMatrix m;
    m.e = {a, cplx(0.0), cplx(0.0), d};
    return m;
}

HomogMatrix operator*(const HomogMatrix& a, const HomogMatrix& b) {
    HomogMatrix m;
    m.e = {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
           a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
    return m;
}

Auto identity_map() { return Auto{}; }

DiskMap make_auto(cplx mu, cplx rho) {
    if (std::abs(std::abs(mu) - 1.0) > 1e-12) throw DomainError("|mu| must be 1");
    if (!(std::abs(rho) < 1.0)) throw DomainError("|rho| must be below 1");
    return Auto{mu, rho};
}

DiskMap make_constant(cplx sigma) {
    if (std::abs(std::abs(sigma) - 1.0) > 1e-12) throw DomainError("|sigma| must be 1");
    return Constant{sigma};
}

Auto auto_from_matrix(const HomogMatrix& m) {
    const cplx d = m(1, 1);
    if (d == cplx(0.0)) throw DomainError("matrix does not represent a disk automorphism");
    cplx mu = m(0, 0) / d;
    const cplx rho = m(0, 1) / m(0, 0);
    mu /= std::abs(mu);
    return Auto{mu, rho};
}

cplx apply(const DiskMap& f, cplx xi) {
    if (std::abs(xi) > 1.0 + disk_slack) throw DomainError("apply needs |xi| <= 1");
    if (const auto* c = std::get_if<Constant>(&f)) return c->sigma;
    const auto& a = std::get<Auto>(f);
    return a.mu * (xi + a.rho) / (1.0 + std::conj(a.rho) * xi);
}

DiskMap compose(const DiskMap& f, const DiskMap& g) {
    if (std::holds_alternative<Constant>(f)) return f;
    const auto& fa = std::get<Auto>(f);
    if (const auto* c = std::get_if<Constant>(&g)) {
        const cplx s = apply(f, c->sigma);
        return Constant{s / std::abs(s)};
    }
    auto m = HomogMatrix::of(fa) * HomogMatrix::of(std::get<Auto>(g));
    return auto_from_matrix(m);
}

DiskMap invert(const DiskMap& f) {
    if (std::holds_alternative<Constant>(f)) throw NotInvertibleError("constant maps have no inverse");
    const auto& a = std::get<Auto>(f);
    return Auto{std::conj(a.mu), -a.mu * a.rho};
}

HomogMatrix layered_matrix(double x0, double x1, std::span<const double> jumps,
                           std::span<const double> r, double omega) {
    if (jumps.size() != r.size()) throw ArgumentError("jumps and reflectivities differ in length");
    HomogMatrix m;
    double prev = x0;
    for (std::size_t j = 0; j < jumps.size(); ++j) {
        const cplx mu = phase(2.0 * (jumps[j] - prev) * omega);
        HomogMatrix s;
        s.e = {mu, mu * r[j], cplx(r[j]), cplx(1.0)};
        m = m * s;
        if ((j & 31u) == 31u) m.normalize();
        prev = jumps[j];
    }
    m = m * HomogMatrix::diag(phase(2.0 * (x1 - prev) * omega), cplx(1.0));
    return m.normalize();
}

Auto layered_reflection_map(double x0, double x1, std::span<const double> jumps,
                            std::span<const double> r, double omega) {
    return auto_from_matrix(layered_matrix(x0, x1, jumps, r, omega));
}

cplx layered_reflection(double x0, double x1, std::span<const double> jumps,
                        std::span<const double> r, double omega) {
    const auto m = layered_matrix(x0, x1, jumps, r, omega);
    return m(0, 1) / m(1, 1);
}

DiskMap step_reflection_map(const StepMedium& m, double omega) {
    const auto r = m.reflectivities();
    return layered_reflection_map(m.interval().x0, m.interval().x1, m.jumps(), r, omega);
}

cplx step_reflection(const StepMedium& m, double omega) {
    const auto r = m.reflectivities();
    return layered_reflection(m.interval().x0, m.interval().x1, m.jumps(), r, omega);
}

}  // namespace layerscatter

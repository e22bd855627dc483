#pragma once

#include <array>
#include <complex>
#include <span>
#include <variant>

#include "layerscatter/media.hpp"

namespace layerscatter {

using cplx = std::complex<double>;

// xi -> mu (xi + rho) / (1 + conj(rho) xi)
struct Auto {
    cplx mu{1.0, 0.0};
    cplx rho{0.0, 0.0};
};

struct Constant {
    cplx sigma{1.0, 0.0};
};

using DiskMap = std::variant<Auto, Constant>;

// Homogeneous coordinates: [[a, b], [c, d]] acts by xi -> (a xi + b) / (c xi + d).
struct HomogMatrix {
    std::array<cplx, 4> e{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};

    cplx& operator()(int i, int j) { return e[2 * i + j]; }
    const cplx& operator()(int i, int j) const { return e[2 * i + j]; }

    cplx det() const { return e[0] * e[3] - e[1] * e[2]; }
    double max_abs() const;
    // divide by the largest entry modulus
    HomogMatrix& normalize();
    cplx project(cplx xi) const { return (e[0] * xi + e[1]) / (e[2] * xi + e[3]); }

    static HomogMatrix of(const Auto& f);
    static HomogMatrix diag(cplx a, cplx d);
};

HomogMatrix operator*(const HomogMatrix& a, const HomogMatrix& b);

Auto identity_map();
DiskMap make_auto(cplx mu, cplx rho);
DiskMap make_constant(cplx sigma);
// Auto map represented by a matrix with nonzero lower-right entry
Auto auto_from_matrix(const HomogMatrix& m);

cplx apply(const DiskMap& f, cplx xi);
DiskMap compose(const DiskMap& f, const DiskMap& g);
DiskMap invert(const DiskMap& f);

// g(xi) for jumps y_j with reflectivities r_j on (x0, x1), zero r allowed
HomogMatrix layered_matrix(double x0, double x1, std::span<const double> jumps,
                           std::span<const double> r, double omega);
Auto layered_reflection_map(double x0, double x1, std::span<const double> jumps,
                            std::span<const double> r, double omega);
cplx layered_reflection(double x0, double x1, std::span<const double> jumps,
                        std::span<const double> r, double omega);

DiskMap step_reflection_map(const StepMedium& m, double omega);
cplx step_reflection(const StepMedium& m, double omega);

}  // namespace layerscatter

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace layerscatter {

using VerblunskyList = std::vector<double>;
using MomentVector = std::vector<double>;

struct OpucQuartet {
    std::size_t n = 0;
    std::vector<double> phi, phi_star, psi, psi_star;
};

// Phi_{j+1} = z Phi_j - r Phi*_j, Psi with -r
OpucQuartet opuc_recursion(std::span<const double> r);

std::complex<double> horner(std::span<const double> c, std::complex<double> z);

// (Psi* - Phi*) / (Psi* + Phi*) at z = exp(2 i delta omega)
std::complex<double> opuc_reflection(const OpucQuartet& q, double delta, double omega);
std::complex<double> opuc_reflection(std::span<const double> r, double delta, double omega);

struct SzegoResult {
    double lhs = 0.0;
    double rhs = 0.0;
    std::size_t nodes = 0;
    double achieved = 0.0;  // last relative change under panel doubling
};

SzegoResult szego_sum(std::span<const double> r, double delta, double rel_tol = 1e-8);

// sum_k p_k m_k
double inner_with_one(std::span<const double> p, std::span<const double> m);

}  // namespace layerscatter

#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "sltx/characteristic.hpp"
#include "sltx/problem.hpp"

namespace sltx {

/// Shared composite sample grid: a uniform grid per segment including both
/// endpoint abscissae. Node counts are odd so composite Simpson applies.
struct Grid {
    std::array<std::vector<double>, 4> x;
    std::array<std::vector<double>, 4> simpson; // quadrature weights per segment
    std::size_t nodes_per_segment = 0;
};

std::shared_ptr<const Grid> make_grid(const Problem& problem, std::size_t nodes_per_segment = 2049);

/// An element F = (f, h) of the weighted space: the function part sampled
/// per segment on a shared grid (interface nodes carry one-sided limits on
/// each side) plus the scalar boundary coordinate.
struct HElement {
    std::shared_ptr<const Grid> grid;
    std::array<std::vector<double>, 4> f;
    double h = 0.0;
};

HElement zero_element(std::shared_ptr<const Grid> grid);

/// y += a*x. Throws GridMismatch when the elements live on different grids.
void add_scaled(double a, const HElement& x, HElement& y);

/// Weighted L2 inner product over the four segments:
///   (1/p1^2) int_{-1}^{h1} fg + (1/(p2^2 theta)) int_{h1}^{h2} fg
/// + (1/(p3^2 theta gamma)) int_{h2}^{h3} fg
/// + (1/(p4^2 theta gamma xi)) int_{h3}^{1} fg,
/// composite Simpson per segment.
double inner_product_H1(const Problem& problem, const HElement& f, const HElement& g);

/// Full inner product: inner_product_H1 + h*k/(rho theta gamma xi).
double inner_product_H(const Problem& problem, const HElement& F, const HElement& G);

double norm_H(const Problem& problem, const HElement& F);

struct BoundaryFunctionals {
    double N = 0.0;  // beta1 f(1) - beta2 f'(1)
    double Np = 0.0; // beta1p f(1) - beta2p f'(1)
};

BoundaryFunctionals boundary_functionals(const Problem& problem, double u_at_1, double du_at_1);

/// Symmetric Gram matrix (row-major, n x n) of the given elements.
/// OpenMP-parallel over the upper triangle; bit-identical to the serial
/// reference for any thread count.
std::vector<double> gram_matrix(const Problem& problem, std::span<const HElement> elements);
std::vector<double> gram_matrix_serial(const Problem& problem, std::span<const HElement> elements);

struct GramReport {
    std::size_t n = 0;
    std::vector<double> gram; // row-major n x n
    double max_offdiag = 0.0;
    double max_diag_deviation = 0.0; // max |G[i][i] - 1|
};

GramReport orthogonality_check(const Problem& problem, std::span<const HElement> elements);

struct Expansion {
    std::vector<double> coeff;    // c_n = <F, Phi_n>
    std::vector<double> residual; // ||F - F_N|| for N = 1..n
    HElement reconstruction;      // F_N at the full truncation level
    double norm_F = 0.0;
    double coeff_sq_sum = 0.0; // Bessel: must not exceed norm_F^2 (up to round-off)
};

/// Truncated expansion of F in the given orthonormal family. Checks
/// orthonormality first (max off-diagonal and diagonal deviation at most
/// 1e-5) and throws NotOrthonormal otherwise.
Expansion expand(const Problem& problem, const HElement& F, std::span<const HElement> phis);

/// CSV export, header `m,n,gram`, 17 significant digits.
void write_gram_csv(std::ostream& os, const GramReport& report);

/// CSV export, header `N,residual`.
void write_residual_csv(std::ostream& os, std::span<const double> residual);

} // namespace sltx

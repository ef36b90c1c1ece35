#pragma once

#include <span>
#include <vector>

#include "sltx/problem.hpp"

namespace sltx {

/// Finite-difference matrix M(lambda) for the full problem on a mesh of m
/// nodes per segment (4m unknowns; interface values are duplicated, one
/// unknown per side). Rows:
///   - interior nodes: -p_i^2 D2 u + (q - lambda) u with central differences,
///   - row 0: left boundary condition with a one-sided 3-point derivative,
///   - two rows per interface: the jump relations, one-sided derivatives,
///   - last row: the lambda-affine right boundary condition.
/// M is affine in lambda. Stored banded (kl = 3, ku = 2) with room for
/// partial-pivoting fill-in.
class FdMatrix {
  public:
    FdMatrix(int n_total, int kl, int ku);

    int
    size() const
    {
        return n_;
    }

    double& at(int i, int j);
    double at(int i, int j) const;

    /// Dense row-major copy (tests and diagnostics only).
    std::vector<double> to_dense() const;

    /// Sign and log-magnitude of det(M) via banded LU with partial
    /// pivoting. Overwrites the stored matrix with its factors; reassemble
    /// before reuse. sign = 0 means an exactly singular pivot.
    struct Det {
        int sign = 0;
        double log_abs = 0.0;
    };
    Det lu_det();

    void zero();

  private:
    int n_;
    int kl_;
    int ku_;
    int rows_; // band storage rows = 2*kl + ku + 1
    std::vector<double> band_;
};

FdMatrix assemble(const Problem& problem, double lambda, int m);

/// Refills an existing matrix of matching size; the scan kernels reuse one
/// scratch matrix per thread instead of reallocating per grid point.
void assemble_into(FdMatrix& M, const Problem& problem, double lambda, int m);

struct DetSample {
    int sign = 0;
    double log_abs = 0.0;
};

/// det sign/log over a lambda grid. OpenMP-parallel; bit-identical to the
/// serial reference for any thread count.
std::vector<DetSample> det_grid(const Problem& problem, std::span<const double> lambdas, int m);
std::vector<DetSample> det_grid_serial(const Problem& problem, std::span<const double> lambdas, int m);

/// Scans g(lambda) = sign(det M(lambda)) over [lo, hi] with phase-controlled
/// steps and bisects each sign change to width 1e-8. Returns the `count`
/// smallest roots; throws ScanExhausted when the window ends first.
std::vector<double> oracle_eigenvalues(const Problem& problem, int count, int m, double lo, double hi);

/// Number of det-sign changes on [lo, hi]; the missed-root guard and the
/// count-agreement checks use this.
int count_sign_changes(const Problem& problem, int m, double lo, double hi);

} // namespace sltx

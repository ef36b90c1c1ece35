#pragma once

#include <array>
#include <memory>
#include <vector>

#include "sltx/characteristic.hpp"
#include "sltx/hilbert.hpp"

namespace sltx {

/// Values and derivatives of a piecewise solution sampled on a shared grid,
/// with one-sided traces at the interval ends and interfaces.
struct PiecewiseSamples {
    std::shared_ptr<const Grid> grid;
    std::array<std::vector<double>, 4> y;
    std::array<std::vector<double>, 4> dy;
    std::array<PointState, kTraceCount> trace;
};

/// Solution of the homogeneous equation at eta with the left shooting data;
/// identical construction to left_solution.
PiecewiseSolution homogeneous_solution(const Problem& problem, double eta, int node_count = 5,
                                       const IvpOptions& options = {});

/// Particular solution of tau w - eta w = f with w(-1) = w'(-1) = 0 (which
/// satisfies the left boundary condition for any coefficients) and the
/// transmission conditions at the interfaces. Built per segment by
/// variation of parameters from the fundamental pair y1, y2 with unit
/// Wronskian; the quadratures run on the sample grid of f.
PiecewiseSamples particular_solution(const Problem& problem, double eta, const HElement& f,
                                     const IvpOptions& options = {});

struct ResolventSolution {
    double eta = 0.0;
    double d = 0.0;         // superposition coefficient: y = d*u + w
    PiecewiseSamples y;
    HElement element;       // (y samples, N'(y)); lives on the grid of F
    double residual = 0.0;  // ||(A - eta)Y - F||_H / max(||F||_H, 1e-300)
};

/// Solves (A - eta)Y = F for real eta outside the spectrum. The scalar
/// equation -N(y) - eta N'(y) = h fixes d:
///   (-N(u) - eta N'(u)) d = h + N(w) + eta N'(w),
/// whose divisor is -Delta(eta). Throws EtaIsEigenvalue when
/// |Delta(eta)| <= 1e-8*(1+|eta|).
ResolventSolution resolvent_solve(const Problem& problem, double eta, const HElement& F,
                                  const IvpOptions& options = {});

} // namespace sltx

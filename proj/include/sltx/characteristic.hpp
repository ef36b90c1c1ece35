#pragma once

#include <array>
#include <span>
#include <vector>

#include "sltx/ivp.hpp"
#include "sltx/problem.hpp"

namespace sltx {

/// Value, derivative and their lambda-derivatives at a single abscissa.
struct Trace {
    double u = 0.0;
    double du = 0.0;
    double ul = 0.0;
    double dul = 0.0;
};

/// Indices into PiecewiseSolution::trace. The h_i-0 / h_i+0 pairs are the
/// one-sided limits on either side of the interface.
enum TracePoint : int {
    kTraceLeftEnd = 0, // x = -1
    kTraceH1Minus,
    kTraceH1Plus,
    kTraceH2Minus,
    kTraceH2Plus,
    kTraceH3Minus,
    kTraceH3Plus,
    kTraceRightEnd, // x = 1
    kTraceCount
};

/// A solution of the equation on the whole interval: four segment
/// trajectories glued by the transmission blocks, with the one-sided traces
/// at -1, h_i+-0 and 1 and the integral of u^2 per segment.
struct PiecewiseSolution {
    double lambda = 0.0;
    std::array<SegmentTrajectory, 4> seg;
    std::array<Trace, kTraceCount> trace;
    std::array<double, 4> seg_l2{};
};

/// Shooting solution from the left endpoint: u(-1) = alpha2, u'(-1) = -alpha1,
/// which satisfies the left boundary condition identically; interfaces are
/// crossed with apply_transmission. The lambda-derivative components start
/// at zero and cross interfaces through the same (lambda-independent) blocks.
PiecewiseSolution left_solution(const Problem& problem, double lambda, int node_count = 5,
                                const IvpOptions& options = {});

/// Shooting solution from the right endpoint with terminal data
/// u(1) = lambda*beta2p + beta2, u'(1) = lambda*beta1p + beta1 (this choice
/// satisfies the eigenparameter boundary condition identically) and
/// lambda-derivative terminal data (beta2p, beta1p); interfaces are crossed
/// right-to-left with invert_transmission.
PiecewiseSolution right_solution(const Problem& problem, double lambda, int node_count = 5,
                                 const IvpOptions& options = {});

struct DeltaSample {
    double lambda = 0.0;
    double delta = 0.0;  // characteristic value
    double ddelta = 0.0; // d(delta)/d(lambda) from the variational components
};

/// Characteristic value Delta(lambda) and its lambda-derivative, computed
/// from the left shooting solution alone (fast path used by root scans).
DeltaSample char_delta(const Problem& problem, double lambda, const IvpOptions& options = {});

struct CharSample {
    double lambda = 0.0;
    double delta = 0.0;
    double ddelta = 0.0;
    std::array<double, 4> w_seg{}; // per-segment Wronskians W(phi_i, chi_i) at segment midpoints
};

/// Full characteristic sample including the per-segment Wronskians, which
/// require the right shooting solution. The Wronskians satisfy
/// w2 = theta*w1, w3 = theta*gamma*w1, w4 = theta*gamma*xi*w1 and
/// Delta = theta*gamma*xi*w1.
CharSample char_function(const Problem& problem, double lambda, const IvpOptions& options = {});

struct CharDerivative {
    double w_prime = 0.0;   // derivative of w1 at the eigenvalue
    double c1 = 0.0;        // proportionality constant phi = c1 * chi at the eigenvalue
    double norm_term = 0.0; // the strictly positive weighted sum; w_prime = c1 * norm_term
};

/// Closed-form derivative of the (scaled) characteristic function at an
/// eigenvalue mu:
///   w'(mu) = c1 * ( sum_i weight_i * int |chi_i|^2 + rho/(theta*gamma*xi) ).
/// c1 is read off the larger-magnitude trace component at -1. Throws
/// NotAnEigenvalue when |Delta(mu)| is above the root tolerance and
/// DegenerateTrace when both chi traces at -1 vanish.
CharDerivative char_derivative_at_eigenvalue(const Problem& problem, double mu, const IvpOptions& options = {});

/// Evaluates Delta over a grid of lambdas. OpenMP-parallel across grid
/// points; each point is an independent integration, so results are
/// bit-identical to the serial reference below for any thread count.
std::vector<DeltaSample> delta_grid(const Problem& problem, std::span<const double> lambdas,
                                    const IvpOptions& options = {});

/// Serial reference implementation of delta_grid, kept for tests and the
/// benchmark target.
std::vector<DeltaSample> delta_grid_serial(const Problem& problem, std::span<const double> lambdas,
                                           const IvpOptions& options = {});

} // namespace sltx

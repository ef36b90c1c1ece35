#include "sltx/characteristic.hpp"

#include <cmath>
#include <cstddef>
#include <exception>

namespace sltx {

namespace {

Trace
trace_of(const SegmentState& s)
{
    return {s.u, s.du, s.ul, s.dul};
}

SegmentState
state_from_trace(const Trace& t)
{
    return {t.u, t.du, t.ul, t.dul, 0.0};
}

/// Pushes (u, du) and (ul, dul) through a transmission block; the blocks do
/// not depend on lambda, so both pairs transform identically.
Trace
transmit(const TransmissionBlock& block, const Trace& t, bool inverse)
{
    const PointState v = inverse ? invert_transmission(block, {t.u, t.du}) : apply_transmission(block, {t.u, t.du});
    const PointState vl = inverse ? invert_transmission(block, {t.ul, t.dul}) : apply_transmission(block, {t.ul, t.dul});
    return {v.u, v.du, vl.u, vl.du};
}

double
delta_from_right_trace(const Problem& problem, double lambda, const Trace& t)
{
    const RightBc& bc = problem.spec().right_bc;
    return lambda * (bc.beta1p * t.u - bc.beta2p * t.du) + (bc.beta1 * t.u - bc.beta2 * t.du);
}

double
ddelta_from_right_trace(const Problem& problem, double lambda, const Trace& t)
{
    const RightBc& bc = problem.spec().right_bc;
    return (bc.beta1p * t.u - bc.beta2p * t.du) + lambda * (bc.beta1p * t.ul - bc.beta2p * t.dul) +
           (bc.beta1 * t.ul - bc.beta2 * t.dul);
}

} // namespace

PiecewiseSolution
left_solution(const Problem& problem, double lambda, int node_count, const IvpOptions& options)
{
    const LeftBc& bc = problem.spec().left_bc;
    PiecewiseSolution sol;
    sol.lambda = lambda;

    Trace t{bc.alpha2, -bc.alpha1, 0.0, 0.0};
    sol.trace[kTraceLeftEnd] = t;
    for (int s = 0; s < 4; ++s) {
        sol.seg[static_cast<std::size_t>(s)] =
            integrate_segment(problem, s, lambda, state_from_trace(t), Direction::LeftToRight, node_count, options);
        const SegmentState& end = sol.seg[static_cast<std::size_t>(s)].final_state();
        sol.seg_l2[static_cast<std::size_t>(s)] = sol.seg[static_cast<std::size_t>(s)].l2();
        t = trace_of(end);
        sol.trace[1 + 2 * s] = t; // h_{s+1}-0, or the right end for s = 3
        if (s < 3) {
            t = transmit(problem.spec().trans[static_cast<std::size_t>(s)], t, /*inverse=*/false);
            sol.trace[2 + 2 * s] = t; // h_{s+1}+0
        }
    }
    return sol;
}

PiecewiseSolution
right_solution(const Problem& problem, double lambda, int node_count, const IvpOptions& options)
{
    const RightBc& bc = problem.spec().right_bc;
    PiecewiseSolution sol;
    sol.lambda = lambda;

    Trace t{lambda * bc.beta2p + bc.beta2, lambda * bc.beta1p + bc.beta1, bc.beta2p, bc.beta1p};
    sol.trace[kTraceRightEnd] = t;
    for (int s = 3; s >= 0; --s) {
        sol.seg[static_cast<std::size_t>(s)] =
            integrate_segment(problem, s, lambda, state_from_trace(t), Direction::RightToLeft, node_count, options);
        const SegmentState& end = sol.seg[static_cast<std::size_t>(s)].final_state();
        sol.seg_l2[static_cast<std::size_t>(s)] = sol.seg[static_cast<std::size_t>(s)].l2();
        t = trace_of(end);
        if (s > 0) {
            sol.trace[2 * s] = t; // h_s+0
            t = transmit(problem.spec().trans[static_cast<std::size_t>(s - 1)], t, /*inverse=*/true);
            sol.trace[2 * s - 1] = t; // h_s-0
        } else {
            sol.trace[kTraceLeftEnd] = t;
        }
    }
    return sol;
}

DeltaSample
char_delta(const Problem& problem, double lambda, const IvpOptions& options)
{
    const PiecewiseSolution phi = left_solution(problem, lambda, 2, options);
    const Trace& t = phi.trace[kTraceRightEnd];
    return {lambda, delta_from_right_trace(problem, lambda, t), ddelta_from_right_trace(problem, lambda, t)};
}

CharSample
char_function(const Problem& problem, double lambda, const IvpOptions& options)
{
    // node_count = 5 puts node 2 exactly at the segment midpoint.
    const PiecewiseSolution phi = left_solution(problem, lambda, 5, options);
    const PiecewiseSolution chi = right_solution(problem, lambda, 5, options);

    CharSample out;
    out.lambda = lambda;
    const Trace& t = phi.trace[kTraceRightEnd];
    out.delta = delta_from_right_trace(problem, lambda, t);
    out.ddelta = ddelta_from_right_trace(problem, lambda, t);
    for (std::size_t s = 0; s < 4; ++s) {
        const SegmentState& a = phi.seg[s].at(2);
        const SegmentState& b = chi.seg[s].at(2);
        out.w_seg[s] = a.u * b.du - a.du * b.u;
    }
    return out;
}

CharDerivative
char_derivative_at_eigenvalue(const Problem& problem, double mu, const IvpOptions& options)
{
    // Root gate: compare |Delta(mu)| against the local scale of Delta.
    const double probe = 0.05 * (1.0 + std::abs(mu));
    const double d0 = std::abs(char_delta(problem, mu, options).delta);
    const double scale = std::max({std::abs(char_delta(problem, mu - probe, options).delta),
                                   std::abs(char_delta(problem, mu + probe, options).delta), 1e-300});
    if (d0 > 1e-6 * (1.0 + std::abs(mu)) * scale) {
        throw NotAnEigenvalue(mu, d0);
    }

    const PiecewiseSolution chi = right_solution(problem, mu, 2, options);
    const Trace& at_left = chi.trace[kTraceLeftEnd];
    if (std::abs(at_left.u) < 1e-12 && std::abs(at_left.du) < 1e-12) {
        throw DegenerateTrace();
    }
    const LeftBc& bc = problem.spec().left_bc;
    // phi(-1) = alpha2, phi'(-1) = -alpha1 exactly; divide by the larger
    // chi component.
    const double c1 = std::abs(at_left.u) >= std::abs(at_left.du) ? bc.alpha2 / at_left.u : -bc.alpha1 / at_left.du;

    const DerivedConstants& k = problem.constants();
    double sum = k.rho / (k.theta * k.gamma * k.xi);
    for (int s = 0; s < 4; ++s) {
        sum += problem.segment_weight(s) * chi.seg_l2[static_cast<std::size_t>(s)];
    }
    return {c1 * sum, c1, sum};
}

std::vector<DeltaSample>
delta_grid(const Problem& problem, std::span<const double> lambdas, const IvpOptions& options)
{
    std::vector<DeltaSample> out(lambdas.size());
    std::vector<std::exception_ptr> errors(lambdas.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(lambdas.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = char_delta(problem, lambdas[k], options);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<DeltaSample>
delta_grid_serial(const Problem& problem, std::span<const double> lambdas, const IvpOptions& options)
{
    std::vector<DeltaSample> out(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        out[i] = char_delta(problem, lambdas[i], options);
    }
    return out;
}

} // namespace sltx

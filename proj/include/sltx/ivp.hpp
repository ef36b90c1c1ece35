#pragma once

#include <vector>

#include "sltx/problem.hpp"

namespace sltx {

/// State propagated along one segment: the solution pair (u, u'), the
/// lambda-derivative pair (du/dlambda, du'/dlambda) obeying the variational
/// equation, and a quadrature accumulator for the running integral of u^2.
struct SegmentState {
    double u = 0.0;
    double du = 0.0;
    double ul = 0.0;
    double dul = 0.0;
    double quad = 0.0;
};

enum class Direction { LeftToRight, RightToLeft };

struct IvpOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double min_step_scale = 1e-13; // times segment length; below this, StepFailure
    long max_steps = 4'000'000;
    // Land on every output node exactly instead of interpolating. The
    // interpolant is accurate to a few 1e-8; paths that differentiate the
    // samples afterwards (the resolvent residual) need exact node states.
    bool step_to_nodes = false;
};

/// Dense output of one segment integration. Nodes are strictly increasing
/// and include both segment endpoints regardless of traversal direction;
/// `state[k].quad` holds the integral of u^2 over the part of the segment
/// already traversed when passing node k (nonnegative in both directions).
struct SegmentTrajectory {
    int segment = 0; // 0-based
    double lambda = 0.0;
    Direction direction = Direction::LeftToRight;
    std::vector<double> x;
    std::vector<SegmentState> state;

    const SegmentState&
    at(std::size_t k) const
    {
        return state[k];
    }

    /// State at the endpoint the traversal finished on.
    const SegmentState&
    final_state() const
    {
        return direction == Direction::LeftToRight ? state.back() : state.front();
    }

    /// Integral of u^2 over the whole segment.
    double
    l2() const
    {
        return direction == Direction::LeftToRight ? state.back().quad : state.front().quad;
    }
};

/** Integrates -p_i^2 u'' + q(x) u = lambda u over one segment as a
 *  first-order system, together with the variational system
 *  -p_i^2 w'' + q(x) w = lambda w + u for w = du/dlambda and the running
 *  quadrature of u^2.
 *
 *  Embedded Dormand-Prince 4(5) pair with adaptive steps; dense output by
 *  cubic Hermite interpolation onto a uniform grid of `node_count` nodes
 *  spanning the segment closure. lambda < 0 needs no special casing.
 *
 *  Throws StepFailure when the controller would need a step below
 *  min_step_scale times the segment length.
 */
SegmentTrajectory integrate_segment(const Problem& problem, int segment, double lambda, const SegmentState& init,
                                    Direction direction, int node_count, const IvpOptions& options = {});

} // namespace sltx

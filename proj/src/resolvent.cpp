#include "sltx/resolvent.hpp"

#include <cmath>

namespace sltx {

namespace {

/// Cumulative integral of uniform samples by piecewise cubic interpolation:
/// fourth order, matching the Simpson grids used elsewhere.
std::vector<double>
cumulative_integral(double step, const std::vector<double>& g)
{
    const std::size_t n = g.size();
    if (n < 4) {
        throw BadInput("cumulative quadrature needs at least 4 samples");
    }
    std::vector<double> c(n, 0.0);
    const double w = step / 24.0;
    c[1] = c[0] + w * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]);
    for (std::size_t i = 1; i + 2 < n; ++i) {
        c[i + 1] = c[i] + w * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2]);
    }
    c[n - 1] = c[n - 2] + w * (g[n - 4] - 5.0 * g[n - 3] + 19.0 * g[n - 2] + 9.0 * g[n - 1]);
    return c;
}

/// Second derivative of uniform samples: five-point central stencil inside,
/// one-sided stencils of matching order at the ends.
std::vector<double>
second_derivative(double step, const std::vector<double>& y)
{
    const std::size_t n = y.size();
    std::vector<double> d(n, 0.0);
    const double inv = 1.0 / (12.0 * step * step);
    d[0] = (35.0 * y[0] - 104.0 * y[1] + 114.0 * y[2] - 56.0 * y[3] + 11.0 * y[4]) * inv;
    d[1] = (11.0 * y[0] - 20.0 * y[1] + 6.0 * y[2] + 4.0 * y[3] - y[4]) * inv;
    for (std::size_t k = 2; k + 2 < n; ++k) {
        d[k] = (-y[k - 2] + 16.0 * y[k - 1] - 30.0 * y[k] + 16.0 * y[k + 1] - y[k + 2]) * inv;
    }
    d[n - 2] = (-y[n - 5] + 4.0 * y[n - 4] + 6.0 * y[n - 3] - 20.0 * y[n - 2] + 11.0 * y[n - 1]) * inv;
    d[n - 1] = (11.0 * y[n - 5] - 56.0 * y[n - 4] + 114.0 * y[n - 3] - 104.0 * y[n - 2] + 35.0 * y[n - 1]) * inv;
    return d;
}

} // namespace

PiecewiseSolution
homogeneous_solution(const Problem& problem, double eta, int node_count, const IvpOptions& options)
{
    return left_solution(problem, eta, node_count, options);
}

PiecewiseSamples
particular_solution(const Problem& problem, double eta, const HElement& f, const IvpOptions& options)
{
    if (!f.grid) {
        throw BadInput("right-hand side must carry a sample grid");
    }
    const Grid& grid = *f.grid;
    const int n = static_cast<int>(grid.nodes_per_segment);
    if (n < 5) {
        throw BadInput("particular solution needs at least 5 nodes per segment");
    }

    PiecewiseSamples w;
    w.grid = f.grid;

    PointState carry{0.0, 0.0}; // w(-1) = w'(-1) = 0
    w.trace[kTraceLeftEnd] = carry;
    for (int s = 0; s < 4; ++s) {
        const auto si = static_cast<std::size_t>(s);
        const double step = grid.x[si][1] - grid.x[si][0];
        const double inv_p2 = 1.0 / problem.p_squared(s);

        IvpOptions exact = options;
        exact.step_to_nodes = true;
        SegmentState init1{1.0, 0.0, 0.0, 0.0, 0.0};
        SegmentState init2{0.0, 1.0, 0.0, 0.0, 0.0};
        const SegmentTrajectory y1 = integrate_segment(problem, s, eta, init1, Direction::LeftToRight, n, exact);
        const SegmentTrajectory y2 = integrate_segment(problem, s, eta, init2, Direction::LeftToRight, n, exact);

        // Normal form w'' = ((q - eta)/p^2) w + g with g = -f/p^2.
        std::vector<double> g1(static_cast<std::size_t>(n)), g2(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            const double g = -f.f[si][ki] * inv_p2;
            g1[ki] = y1.state[ki].u * g;
            g2[ki] = y2.state[ki].u * g;
        }
        const std::vector<double> i1 = cumulative_integral(step, g1);
        const std::vector<double> i2 = cumulative_integral(step, g2);

        auto& val = w.y[si];
        auto& der = w.dy[si];
        val.resize(static_cast<std::size_t>(n));
        der.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            val[ki] = carry.u * y1.state[ki].u + carry.du * y2.state[ki].u + y2.state[ki].u * i1[ki] -
                      y1.state[ki].u * i2[ki];
            der[ki] = carry.u * y1.state[ki].du + carry.du * y2.state[ki].du + y2.state[ki].du * i1[ki] -
                      y1.state[ki].du * i2[ki];
        }

        carry = {val.back(), der.back()};
        w.trace[1 + 2 * s] = carry; // h_{s+1}-0, or the right end for s = 3
        if (s < 3) {
            carry = apply_transmission(problem.spec().trans[si], carry);
            w.trace[2 + 2 * s] = carry;
        }
    }
    return w;
}

ResolventSolution
resolvent_solve(const Problem& problem, double eta, const HElement& F, const IvpOptions& options)
{
    const double delta = char_delta(problem, eta, options).delta;
    if (std::abs(delta) <= 1e-8 * (1.0 + std::abs(eta))) {
        throw EtaIsEigenvalue(eta, std::abs(delta));
    }
    if (!F.grid) {
        throw BadInput("right-hand side must carry a sample grid");
    }
    const Grid& grid = *F.grid;
    const int n = static_cast<int>(grid.nodes_per_segment);

    IvpOptions exact = options;
    exact.step_to_nodes = true;
    const PiecewiseSolution u = homogeneous_solution(problem, eta, n, exact);
    const PiecewiseSamples w = particular_solution(problem, eta, F, options);

    const Trace& u_end = u.trace[kTraceRightEnd];
    const PointState& w_end = w.trace[kTraceRightEnd];
    const BoundaryFunctionals nu = boundary_functionals(problem, u_end.u, u_end.du);
    const BoundaryFunctionals nw = boundary_functionals(problem, w_end.u, w_end.du);

    ResolventSolution out;
    out.eta = eta;
    out.d = (F.h + nw.N + eta * nw.Np) / (-nu.N - eta * nu.Np);

    out.y.grid = F.grid;
    for (std::size_t s = 0; s < 4; ++s) {
        out.y.y[s].resize(static_cast<std::size_t>(n));
        out.y.dy[s].resize(static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
            out.y.y[s][k] = out.d * u.seg[s].state[k].u + w.y[s][k];
            out.y.dy[s][k] = out.d * u.seg[s].state[k].du + w.dy[s][k];
        }
    }
    for (int t = 0; t < kTraceCount; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        out.y.trace[ti] = {out.d * u.trace[ti].u + w.trace[ti].u, out.d * u.trace[ti].du + w.trace[ti].du};
    }

    out.element.grid = F.grid;
    out.element.f = out.y.y;
    const PointState& y_end = out.y.trace[kTraceRightEnd];
    const BoundaryFunctionals ny = boundary_functionals(problem, y_end.u, y_end.du);
    out.element.h = ny.Np;

    // Residual of both components of (A - eta)Y = F; the function part uses
    // finite differences on the sample grid.
    HElement res = zero_element(F.grid);
    for (int s = 0; s < 4; ++s) {
        const auto si = static_cast<std::size_t>(s);
        const double step = grid.x[si][1] - grid.x[si][0];
        const double p2 = problem.p_squared(s);
        const std::vector<double> d2 = second_derivative(step, out.y.y[si]);
        for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
            const double x = grid.x[si][k];
            res.f[si][k] = -p2 * d2[k] + (problem.q_at(s, x) - eta) * out.y.y[si][k] - F.f[si][k];
        }
    }
    res.h = -ny.N - eta * ny.Np - F.h;
    out.residual = norm_H(problem, res) / std::max(norm_H(problem, F), 1e-300);
    return out;
}

} // namespace sltx

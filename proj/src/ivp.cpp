#include "sltx/ivp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace sltx {

namespace {

using State = std::array<double, 5>; // u, du, ul, dul, quad

State
to_array(const SegmentState& s)
{
    return {s.u, s.du, s.ul, s.dul, s.quad};
}

SegmentState
from_array(const State& a)
{
    return {a[0], a[1], a[2], a[3], a[4]};
}

struct Rhs {
    const Problem& problem;
    int segment;
    double lambda;
    double inv_p2;

    State
    operator()(double x, const State& y) const
    {
        const double q = problem.q_at(segment, x);
        State f;
        f[0] = y[1];
        f[1] = (q - lambda) * y[0] * inv_p2;
        f[2] = y[3];
        f[3] = ((q - lambda) * y[2] - y[0]) * inv_p2;
        f[4] = y[0] * y[0];
        return f;
    }
};

// Dormand-Prince RK5(4)7M tableau.
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
// Difference between the 5th and the embedded 4th order weights.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

State
axpy(const State& y, double h, const State& k1, double a1)
{
    State r;
    for (std::size_t i = 0; i < 5; ++i) r[i] = y[i] + h * a1 * k1[i];
    return r;
}

/// Cubic Hermite interpolation of the state over one accepted step.
State
hermite(double theta, double h, const State& y0, const State& f0, const State& y1, const State& f1)
{
    const double t = theta;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    State r;
    for (std::size_t i = 0; i < 5; ++i) {
        r[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    }
    return r;
}

} // namespace

SegmentTrajectory
integrate_segment(const Problem& problem, int segment, double lambda, const SegmentState& init, Direction direction,
                  int node_count, const IvpOptions& options)
{
    if (node_count < 2) {
        throw BadInput("node_count must be at least 2");
    }
    const double a = problem.segment_begin(segment);
    const double b = problem.segment_end(segment);
    const double length = b - a;
    const double x_start = direction == Direction::LeftToRight ? a : b;
    const double x_end = direction == Direction::LeftToRight ? b : a;
    const double dir = direction == Direction::LeftToRight ? 1.0 : -1.0;
    const double h_min = options.min_step_scale * length;

    const Rhs rhs{problem, segment, lambda, 1.0 / problem.p_squared(segment)};

    // Output grid in traversal order; converted to increasing order below.
    const std::size_t n = static_cast<std::size_t>(node_count);
    std::vector<double> nodes(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
        nodes[k] = x_start + frac * (x_end - x_start);
    }
    nodes.front() = x_start;
    nodes.back() = x_end;

    std::vector<SegmentState> out(n);
    out[0] = init;
    std::size_t next_node = 1;

    double x = x_start;
    State y = to_array(init);
    State f = rhs(x, y);
    double h = dir * length / 100.0;

    long steps = 0;
    while (next_node < n) {
        if (++steps > options.max_steps) {
            throw StepFailure("step budget exhausted on segment " + std::to_string(segment + 1));
        }
        if (options.step_to_nodes && (x + h - nodes[next_node]) * dir > 0.0) {
            h = nodes[next_node] - x;
        }
        if ((x + h - x_end) * dir > 0.0) {
            h = x_end - x;
        }
        if (std::abs(h) < h_min) {
            throw StepFailure("minimum step reached on segment " + std::to_string(segment + 1) + " at lambda = " +
                              std::to_string(lambda));
        }

        const State k1 = f;
        const State k2 = rhs(x + kC2 * h, axpy(y, h, k1, kA21));
        State tmp;
        for (std::size_t i = 0; i < 5; ++i) tmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        const State k3 = rhs(x + kC3 * h, tmp);
        for (std::size_t i = 0; i < 5; ++i) tmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        const State k4 = rhs(x + kC4 * h, tmp);
        for (std::size_t i = 0; i < 5; ++i)
            tmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        const State k5 = rhs(x + kC5 * h, tmp);
        for (std::size_t i = 0; i < 5; ++i)
            tmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
        const State k6 = rhs(x + h, tmp);
        State y_new;
        for (std::size_t i = 0; i < 5; ++i)
            y_new[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] + kB6 * k6[i]);
        const State k7 = rhs(x + h, y_new); // FSAL

        double err_sq = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            const double e =
                h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
            const double scale = options.atol + options.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double r = e / scale;
            err_sq += r * r;
        }
        const double err = std::sqrt(err_sq / 5.0);

        if (err <= 1.0) {
            // Emit all output nodes passed by this step via Hermite interpolation.
            while (next_node < n && (nodes[next_node] - (x + h)) * dir <= 0.0) {
                const double theta = (nodes[next_node] - x) / h;
                out[next_node] = from_array(hermite(theta, h, y, k1, y_new, k7));
                ++next_node;
            }
            x += h;
            y = y_new;
            f = k7;
        }

        const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    // Final node exactly from the integrated state, not the interpolant.
    out[n - 1] = from_array(y);

    SegmentTrajectory traj;
    traj.segment = segment;
    traj.lambda = lambda;
    traj.direction = direction;
    if (direction == Direction::LeftToRight) {
        traj.x = std::move(nodes);
        traj.state = std::move(out);
    } else {
        traj.x.assign(nodes.rbegin(), nodes.rend());
        traj.state.assign(out.rbegin(), out.rend());
        for (auto& s : traj.state) {
            s.quad = -s.quad; // traversal ran against the x axis
        }
    }
    return traj;
}

} // namespace sltx

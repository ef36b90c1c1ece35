#include "sltx/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sltx {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
constexpr int kPotentialSamples = 101;
} // namespace

double
PhaseModel::phase(double lambda) const
{
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double gap = lambda - qbar[i];
        if (gap > 0.0) {
            total += len_over_p[i] * std::sqrt(gap);
        }
    }
    return total;
}

double
PhaseModel::velocity(double lambda) const
{
    double v = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double gap = lambda - qbar[i];
        if (gap > 1e-12) {
            v += len_over_p[i] / (2.0 * std::sqrt(gap));
        }
    }
    return v;
}

double
PhaseModel::step(double lambda) const
{
    const double cap = std::max(0.5, 0.02 * (1.0 + std::abs(lambda)));
    const double v = velocity(lambda);
    // velocity decreases in lambda, so gain over [lambda, lambda + step]
    // is at most step * velocity(lambda).
    const double s = v > 0.0 ? std::min(cap, kHalfPi / v) : cap;
    return std::max(s, 1e-3);
}

PhaseModel
make_phase_model(const Problem& problem)
{
    PhaseModel m;
    for (int s = 0; s < 4; ++s) {
        const double a = problem.segment_begin(s);
        const double b = problem.segment_end(s);
        double mean = 0.0;
        for (int k = 0; k < kPotentialSamples; ++k) {
            const double x = a + (b - a) * static_cast<double>(k) / (kPotentialSamples - 1);
            mean += problem.q_at(s, x);
        }
        m.qbar[static_cast<std::size_t>(s)] = mean / kPotentialSamples;
        m.len_over_p[static_cast<std::size_t>(s)] =
            (b - a) / std::abs(problem.spec().p[static_cast<std::size_t>(s)]);
    }
    return m;
}

double
auto_lambda_start(const Problem& problem)
{
    double q_min = std::numeric_limits<double>::infinity();
    double q_abs_max = 0.0;
    for (int s = 0; s < 4; ++s) {
        const double a = problem.segment_begin(s);
        const double b = problem.segment_end(s);
        for (int k = 0; k < kPotentialSamples; ++k) {
            const double x = a + (b - a) * static_cast<double>(k) / (kPotentialSamples - 1);
            const double q = problem.q_at(s, x);
            q_min = std::min(q_min, q);
            q_abs_max = std::max(q_abs_max, std::abs(q));
        }
    }
    return q_min - 10.0 * (1.0 + q_abs_max);
}

std::vector<double>
phase_grid(const PhaseModel& model, double lo, double hi)
{
    std::vector<double> grid;
    double lambda = lo;
    grid.push_back(lambda);
    while (lambda < hi) {
        lambda = std::min(lambda + model.step(lambda), hi);
        grid.push_back(lambda);
    }
    return grid;
}

} // namespace sltx

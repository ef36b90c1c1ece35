#pragma once

// Shared fixtures for the test suites: the regression corpus, a generator
// of random valid problems (documented ranges below), and closed-form
// oracles for the baseline problem B0. Everything here is test-only and
// independent of the library's solution path.

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sltx/problem.hpp"

namespace sltx::testing {

/// Baseline problem B0: p = 1, interfaces at -0.5, 0, 0.5, q = 0, Dirichlet
/// data on the left, u' + lambda*u type condition on the right, identity
/// transmission blocks.
inline ProblemSpec
b0_spec()
{
    ProblemSpec s;
    s.p = {1.0, 1.0, 1.0, 1.0};
    s.h = {-0.5, 0.0, 0.5};
    s.q = PotentialSpec::zero();
    s.left_bc = {1.0, 0.0};
    s.right_bc = {0.0, 1.0, 1.0, 0.0};
    s.trans = {TransmissionBlock{}, TransmissionBlock{}, TransmissionBlock{}};
    return s;
}

inline Problem
b0()
{
    return Problem::validate(b0_spec());
}

/// B0 with the block (2,0,0,1) at h1, so theta = 2.
inline ProblemSpec
b_theta2_spec()
{
    ProblemSpec s = b0_spec();
    s.trans[0] = {2.0, 0.0, 0.0, 1.0};
    return s;
}

/// Nonuniform leading coefficients, polynomial potential, full transmission
/// blocks and a mixed right boundary condition.
inline ProblemSpec
b_varp_spec()
{
    ProblemSpec s;
    s.p = {1.0, 1.3, 0.8, 1.1};
    s.h = {-0.4, 0.1, 0.55};
    s.q.coeff = {{{0.3}, {-0.5, 0.2}, {1.0, 0.0, -0.3}, {0.2}}};
    s.left_bc = {0.6, 0.8};
    s.right_bc = {0.5, 1.2, 1.0, 0.3}; // rho = 1.0*1.2 - 0.5*0.3 = 1.05
    s.trans = {TransmissionBlock{1.1, 0.2, -0.1, 1.0}, TransmissionBlock{0.9, -0.15, 0.05, 1.2},
               TransmissionBlock{1.0, 0.1, 0.1, 0.9}};
    return s;
}

/// B0 with q = -6: the whole spectrum shifts down by 6, so the lowest
/// eigenvalues are negative.
inline ProblemSpec
b_negq_spec()
{
    ProblemSpec s = b0_spec();
    for (auto& c : s.q.coeff) c = {-6.0};
    return s;
}

struct NamedProblem {
    std::string name;
    Problem problem;
};

inline std::vector<NamedProblem>
corpus()
{
    return {{"b0", Problem::validate(b0_spec())},
            {"theta2", Problem::validate(b_theta2_spec())},
            {"varp", Problem::validate(b_varp_spec())},
            {"negq", Problem::validate(b_negq_spec())}};
}

/// Random valid problem. Ranges: |p| in [0.6, 1.6] with random sign;
/// interfaces sorted in [-0.7, 0.7] with pairwise gaps >= 0.25; q per
/// segment a polynomial of degree <= 2 with coefficients in [-1.5, 1.5];
/// left data on the unit circle; right coefficients in [-1.2, 1.2] with
/// rho in [0.3, 2]; blocks with diagonal in [0.7, 1.4], off-diagonal in
/// [-0.25, 0.25] and det in [0.4, 2.2].
inline ProblemSpec
random_spec(std::mt19937& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    ProblemSpec s;
    for (auto& p : s.p) {
        p = uniform(0.6, 1.6) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    }
    for (;;) {
        double a = uniform(-0.7, 0.7), b = uniform(-0.7, 0.7), c = uniform(-0.7, 0.7);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        if (b - a >= 0.25 && c - b >= 0.25) {
            s.h = {a, b, c};
            break;
        }
    }
    for (auto& c : s.q.coeff) {
        const int degree = static_cast<int>(unit(rng) * 3.0);
        c.clear();
        for (int k = 0; k <= degree; ++k) c.push_back(uniform(-1.5, 1.5));
    }
    const double tau = uniform(0.0, 3.0);
    s.left_bc = {std::cos(tau), std::sin(tau)};
    for (;;) {
        s.right_bc = {uniform(-1.2, 1.2), uniform(-1.2, 1.2), uniform(-1.2, 1.2), uniform(-1.2, 1.2)};
        const double rho = s.right_bc.beta1p * s.right_bc.beta2 - s.right_bc.beta1 * s.right_bc.beta2p;
        if (rho >= 0.3 && rho <= 2.0) break;
    }
    for (auto& t : s.trans) {
        for (;;) {
            t = {uniform(0.7, 1.4), uniform(-0.25, 0.25), uniform(-0.25, 0.25), uniform(0.7, 1.4)};
            if (t.det() >= 0.4 && t.det() <= 2.2) break;
        }
    }
    return s;
}

/// Closed-form characteristic value of B0 (hyperbolic continuation for
/// negative lambda).
inline double
b0_delta_closed(double lambda)
{
    if (lambda > 0.0) {
        const double s = std::sqrt(lambda);
        return std::cos(2.0 * s) - s * std::sin(2.0 * s);
    }
    if (lambda < 0.0) {
        const double s = std::sqrt(-lambda);
        return std::cosh(2.0 * s) + s * std::sinh(2.0 * s);
    }
    return 1.0;
}

/// First root of tan(2s) = 1/s in (0, pi/4) by plain bisection; the B0
/// fundamental eigenvalue is its square.
inline double
b0_s1()
{
    auto g = [](double s) { return std::tan(2.0 * s) - 1.0 / s; };
    double lo = 1e-8, hi = std::atan(1.0); // pi/4
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Closed-form characteristic value of B0 with a constant potential q0:
/// the equation part oscillates with r = sqrt(lambda - q0) while the
/// boundary condition keeps the raw eigenvalue parameter, so a potential
/// shift does not simply translate the spectrum.
inline double
b0_shifted_delta_closed(double q0, double lambda)
{
    const double gap = lambda - q0;
    if (gap > 0.0) {
        const double r = std::sqrt(gap);
        return std::cos(2.0 * r) - lambda * std::sin(2.0 * r) / r;
    }
    if (gap < 0.0) {
        const double r = std::sqrt(-gap);
        return std::cosh(2.0 * r) - lambda * std::sinh(2.0 * r) / r;
    }
    return 1.0 - 2.0 * lambda;
}

/// First `count` eigenvalues of B0 with constant potential q0 from the
/// closed form: scan in the variable r = sqrt(lambda - q0) and bisect.
inline std::vector<double>
b0_shifted_eigenvalues(double q0, int count)
{
    auto delta_r = [q0](double r) { return b0_shifted_delta_closed(q0, q0 + r * r); };
    std::vector<double> roots;
    double r_prev = 1e-9;
    double f_prev = delta_r(r_prev);
    const double step = 1e-3;
    for (double r = step; roots.size() < static_cast<std::size_t>(count) && r < 1e4; r += step) {
        const double f = delta_r(r);
        if (f_prev * f < 0.0) {
            double lo = r_prev, hi = r;
            for (int i = 0; i < 100; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (delta_r(mid) * delta_r(lo) <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            roots.push_back(q0 + root * root);
        }
        r_prev = r;
        f_prev = f;
    }
    return roots;
}

/// First `count` eigenvalues of B0.
inline std::vector<double>
b0_eigenvalues(int count)
{
    return b0_shifted_eigenvalues(0.0, count);
}

inline double
rel_err(double value, double reference)
{
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

/// |a - b| measured in units in the last place at the given scale.
inline double
ulp_diff_at(double a, double b, double scale)
{
    if (a == b) return 0.0;
    const double s = std::max(scale, std::numeric_limits<double>::min());
    const double ulp = std::nextafter(s, std::numeric_limits<double>::infinity()) - s;
    return std::abs(a - b) / ulp;
}

} // namespace sltx::testing

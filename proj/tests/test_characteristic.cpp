#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sltx/characteristic.hpp"
#include "support.hpp"

using namespace sltx;
using namespace sltx::testing;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_CASE("left solution of B0 at lambda = pi^2 is -sin(pi(x+1))/pi")
{
    const Problem p = b0();
    const PiecewiseSolution phi = left_solution(p, kPi * kPi, 9);
    for (int s = 0; s < 4; ++s) {
        const auto& traj = phi.seg[static_cast<std::size_t>(s)];
        for (std::size_t k = 0; k < traj.x.size(); ++k) {
            const double x = traj.x[k];
            CHECK(std::abs(traj.state[k].u - (-std::sin(kPi * (x + 1.0)) / kPi)) < 1e-7);
        }
    }
    const Trace& end = phi.trace[kTraceRightEnd];
    CHECK(std::abs(end.u - 0.0) < 1e-9);
    CHECK(std::abs(end.du - (-1.0)) < 1e-9);
}

TEST_CASE("left solution of B0 at lambda = 0 is -(x+1)")
{
    const Problem p = b0();
    const PiecewiseSolution phi = left_solution(p, 0.0, 3);
    const Trace& end = phi.trace[kTraceRightEnd];
    CHECK(std::abs(end.u - (-2.0)) < 1e-11);
    CHECK(std::abs(end.du - (-1.0)) < 1e-11);
}

TEST_CASE("derivative trace doubles across a (1,0,0,2) block")
{
    ProblemSpec s = b0_spec();
    s.trans[0] = {1.0, 0.0, 0.0, 2.0};
    const Problem p = Problem::validate(s);
    const PiecewiseSolution phi = left_solution(p, 0.0, 3);
    CHECK(phi.trace[kTraceH1Plus].du == 2.0 * phi.trace[kTraceH1Minus].du);
    CHECK(phi.trace[kTraceH1Plus].u == phi.trace[kTraceH1Minus].u);
}

TEST_CASE("transmission residual of both solutions vanishes at every interface")
{
    std::mt19937 rng(314);
    for (int trial = 0; trial < 5; ++trial) {
        const Problem p = Problem::validate(random_spec(rng));
        const PiecewiseSolution phi = left_solution(p, 3.3, 3);
        const PiecewiseSolution chi = right_solution(p, 3.3, 3);
        for (int k = 0; k < 3; ++k) {
            for (const PiecewiseSolution* sol : {&phi, &chi}) {
                const Trace& minus = sol->trace[static_cast<std::size_t>(1 + 2 * k)];
                const Trace& plus = sol->trace[static_cast<std::size_t>(2 + 2 * k)];
                const PointState mapped =
                    apply_transmission(p.spec().trans[static_cast<std::size_t>(k)], {minus.u, minus.du});
                const double scale = std::max({1.0, std::abs(plus.u), std::abs(plus.du)});
                CHECK(std::abs(mapped.u - plus.u) < 1e-12 * scale);
                CHECK(std::abs(mapped.du - plus.du) < 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("right solution of B0 at lambda = 0 is the constant 1")
{
    const Problem p = b0();
    const PiecewiseSolution chi = right_solution(p, 0.0, 9);
    for (int s = 0; s < 4; ++s) {
        const auto& traj = chi.seg[static_cast<std::size_t>(s)];
        for (const SegmentState& st : traj.state) {
            CHECK(std::abs(st.u - 1.0) < 1e-12);
            CHECK(std::abs(st.du) < 1e-12);
        }
    }
}

TEST_CASE("right solution terminal data satisfies the eigenparameter condition identically")
{
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> lam(-10.0, 100.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Problem p = Problem::validate(random_spec(rng));
        const double lambda = lam(rng);
        const RightBc& bc = p.spec().right_bc;
        const double u1 = lambda * bc.beta2p + bc.beta2;
        const double du1 = lambda * bc.beta1p + bc.beta1;
        const double residual = lambda * (bc.beta1p * u1 - bc.beta2p * du1) + (bc.beta1 * u1 - bc.beta2 * du1);
        CHECK(std::abs(residual) <= 1e-9 * (1.0 + lambda * lambda));

        // And the integrated solution carries exactly that terminal data.
        const PiecewiseSolution chi = right_solution(p, lambda, 2);
        CHECK(chi.trace[kTraceRightEnd].u == u1);
        CHECK(chi.trace[kTraceRightEnd].du == du1);
    }
}

TEST_CASE("right solution of B0 at lambda = pi^2 matches cos(pi(x-1)) + pi sin(pi(x-1))")
{
    const Problem p = b0();
    const double lambda = kPi * kPi;
    const PiecewiseSolution chi = right_solution(p, lambda, 9);
    for (int s = 0; s < 4; ++s) {
        const auto& traj = chi.seg[static_cast<std::size_t>(s)];
        for (std::size_t k = 0; k < traj.x.size(); ++k) {
            const double t = traj.x[k] - 1.0;
            const double ref = std::cos(kPi * t) + kPi * std::sin(kPi * t);
            CHECK(std::abs(traj.state[k].u - ref) < 1e-7);
        }
    }
}

TEST_CASE("characteristic value of B0 at lambda = 0 is 1")
{
    const Problem p = b0();
    const CharSample sample = char_function(p, 0.0);
    CHECK(std::abs(sample.delta - 1.0) < 1e-11);
}

TEST_CASE("characteristic function of B0 matches the closed form")
{
    const Problem p = b0();
    for (double lambda : {-5.0, -1.0, 0.0, 0.3, 2.0, 9.87, 31.0, 77.7, 100.0}) {
        const DeltaSample s = char_delta(p, lambda);
        const double ref = b0_delta_closed(lambda);
        CHECK(std::abs(s.delta - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("B0 fundamental root from the scalar oracle is a root of Delta")
{
    const Problem p = b0();
    const double s1 = b0_s1();
    const double mu1 = s1 * s1;
    CHECK(std::abs(char_delta(p, mu1).delta) <= 1e-8);
}

TEST_CASE("Wronskians are constant inside segments and scale by the determinants")
{
    std::mt19937 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const Problem p = Problem::validate(random_spec(rng));
        std::uniform_real_distribution<double> lam(-3.0, 40.0);
        for (int j = 0; j < 5; ++j) {
            const double lambda = lam(rng);
            const PiecewiseSolution phi = left_solution(p, lambda, 7);
            const PiecewiseSolution chi = right_solution(p, lambda, 7);
            std::array<double, 4> w{};
            for (std::size_t s = 0; s < 4; ++s) {
                // Five strictly interior nodes of the 7-node grid.
                double w_first = 0.0;
                for (std::size_t k = 1; k <= 5; ++k) {
                    const SegmentState& a = phi.seg[s].state[k];
                    const SegmentState& b = chi.seg[s].state[k];
                    const double wk = a.u * b.du - a.du * b.u;
                    if (k == 1) {
                        w_first = wk;
                    } else {
                        CHECK(rel_err(wk, w_first) < 1e-7);
                    }
                }
                w[s] = w_first;
            }
            const DerivedConstants& c = p.constants();
            if (std::abs(w[0]) > 1e-12) {
                CHECK(rel_err(w[1] / w[0], c.theta) < 1e-7);
                CHECK(rel_err(w[2] / w[0], c.theta * c.gamma) < 1e-7);
                CHECK(rel_err(w[3] / w[0], c.theta * c.gamma * c.xi) < 1e-7);
            }
        }
    }
}

TEST_CASE("char_function Wronskians reproduce Delta = theta gamma xi w1")
{
    std::mt19937 rng(561);
    for (int trial = 0; trial < 8; ++trial) {
        const Problem p = Problem::validate(random_spec(rng));
        std::uniform_real_distribution<double> lam(-2.0, 30.0);
        const CharSample s = char_function(p, lam(rng));
        const DerivedConstants& c = p.constants();
        if (std::abs(s.w_seg[0]) > 1e-12) {
            CHECK(rel_err(c.theta * c.gamma * c.xi * s.w_seg[0], s.delta) < 1e-7);
            CHECK(rel_err(s.w_seg[1], c.theta * s.w_seg[0]) < 1e-7);
            CHECK(rel_err(s.w_seg[2], c.theta * c.gamma * s.w_seg[0]) < 1e-7);
            CHECK(rel_err(s.w_seg[3], c.theta * c.gamma * c.xi * s.w_seg[0]) < 1e-7);
        }
    }
}

TEST_CASE("variational derivative of Delta matches central differences")
{
    std::mt19937 rng(12021);
    std::uniform_real_distribution<double> lam(-4.0, 60.0);
    const Problem p = Problem::validate(b_varp_spec());
    int checked = 0;
    while (checked < 20) {
        const double lambda = lam(rng);
        const DeltaSample s = char_delta(p, lambda);
        if (std::abs(s.delta) < 1e-3) continue; // stay away from roots
        const double eps = 1e-5 * (1.0 + std::abs(lambda));
        const double fd = (char_delta(p, lambda + eps).delta - char_delta(p, lambda - eps).delta) / (2.0 * eps);
        CHECK(rel_err(s.ddelta, fd) < 1e-6);
        ++checked;
    }
}

TEST_CASE("derivative at an eigenvalue: dual routes agree")
{
    const Problem p = b0();
    const double mu1 = b0_s1() * b0_s1();
    const CharDerivative cd = char_derivative_at_eigenvalue(p, mu1);
    const DerivedConstants& c = p.constants();

    const double scaled = cd.w_prime * c.theta * c.gamma * c.xi;
    const double dd = char_delta(p, mu1).ddelta;
    CHECK(rel_err(scaled, dd) < 1e-5);

    const double eps = 1e-5;
    const double fd = (char_delta(p, mu1 + eps).delta - char_delta(p, mu1 - eps).delta) /
                      (2.0 * eps * c.theta * c.gamma * c.xi);
    CHECK(rel_err(cd.w_prime, fd) < 1e-4);

    CHECK(cd.w_prime != 0.0);
    CHECK(cd.norm_term > 0.0);
    CHECK((cd.w_prime > 0.0) == (cd.c1 > 0.0));
}

TEST_CASE("phi and chi traces are proportional at a root with one constant")
{
    const Problem p = Problem::validate(b_varp_spec());
    // Locate a root by coarse scan + bisection on char_delta.
    double lo = 0.0, hi = 0.0;
    double prev_lambda = -8.0;
    double prev = char_delta(p, prev_lambda).delta;
    for (double lambda = -7.5; lambda < 60.0; lambda += 0.5) {
        const double d = char_delta(p, lambda).delta;
        if (prev * d < 0.0) {
            lo = prev_lambda;
            hi = lambda;
            break;
        }
        prev = d;
        prev_lambda = lambda;
    }
    REQUIRE(hi > lo);
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (char_delta(p, mid).delta * char_delta(p, lo).delta <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const double mu = 0.5 * (lo + hi);

    const PiecewiseSolution phi = left_solution(p, mu, 3);
    const PiecewiseSolution chi = right_solution(p, mu, 3);
    const CharDerivative cd = char_derivative_at_eigenvalue(p, mu);
    for (int t = 0; t < kTraceCount; ++t) {
        const Trace& a = phi.trace[static_cast<std::size_t>(t)];
        const Trace& b = chi.trace[static_cast<std::size_t>(t)];
        const double scale = std::max({std::abs(a.u), std::abs(a.du), 1e-6});
        CHECK(std::abs(a.u - cd.c1 * b.u) < 1e-6 * scale);
        CHECK(std::abs(a.du - cd.c1 * b.du) < 1e-6 * scale);
    }
}

TEST_CASE("derivative gate rejects non-eigenvalues")
{
    const Problem p = b0();
    const double mu1 = b0_s1() * b0_s1();
    CHECK_THROWS_AS(char_derivative_at_eigenvalue(p, mu1 + 0.01), NotAnEigenvalue);
}

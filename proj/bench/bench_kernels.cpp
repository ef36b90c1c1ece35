// Times the OpenMP scan kernels against their serial reference
// implementations and prints one table row per kernel.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sltx/characteristic.hpp"
#include "sltx/fd_oracle.hpp"
#include "sltx/hilbert.hpp"
#include "sltx/phase.hpp"
#include "sltx/spectrum.hpp"

namespace {

/// Best of three timed runs after one untimed warm-up pass.
double
seconds(const std::function<void()>& fn)
{
    fn();
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

sltx::Problem
benchmark_problem()
{
    sltx::ProblemSpec s;
    s.p = {1.0, 1.3, 0.8, 1.1};
    s.h = {-0.4, 0.1, 0.55};
    s.q.coeff = {{{0.3}, {-0.5, 0.2}, {1.0, 0.0, -0.3}, {0.2}}};
    s.left_bc = {0.6, 0.8};
    s.right_bc = {0.5, 1.2, 1.0, 0.3};
    s.trans = {sltx::TransmissionBlock{1.1, 0.2, -0.1, 1.0}, sltx::TransmissionBlock{0.9, -0.15, 0.05, 1.2},
               sltx::TransmissionBlock{1.0, 0.1, 0.1, 0.9}};
    return sltx::Problem::validate(s);
}

} // namespace

int
main()
{
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif
    const sltx::Problem problem = benchmark_problem();

    std::vector<double> lambdas;
    for (int i = 0; i < 96; ++i) {
        lambdas.push_back(-5.0 + 1.75 * i);
    }

    std::printf("%-18s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

    {
        std::vector<sltx::DeltaSample> serial, parallel;
        const double ts = seconds([&] { serial = sltx::delta_grid_serial(problem, lambdas); });
        const double tp = seconds([&] { parallel = sltx::delta_grid(problem, lambdas); });
        std::printf("%-18s %12.4f %12.4f %8.2fx\n", "delta_grid", ts, tp, ts / tp);
    }

    {
        std::vector<sltx::DetSample> serial, parallel;
        const int mesh = 800;
        const double ts = seconds([&] { serial = sltx::det_grid_serial(problem, lambdas, mesh); });
        const double tp = seconds([&] { parallel = sltx::det_grid(problem, lambdas, mesh); });
        std::printf("%-18s %12.4f %12.4f %8.2fx\n", "det_grid", ts, tp, ts / tp);
    }

    {
        const auto pairs = sltx::find_eigenvalues(problem, 8);
        std::vector<sltx::HElement> elements;
        for (const auto& pair : pairs) elements.push_back(pair.element);
        std::vector<double> serial, parallel;
        const double ts = seconds([&] { serial = sltx::gram_matrix_serial(problem, elements); });
        const double tp = seconds([&] { parallel = sltx::gram_matrix(problem, elements); });
        std::printf("%-18s %12.4f %12.4f %8.2fx\n", "gram_matrix", ts, tp, ts / tp);
    }
    return 0;
}

#include "sltx/fd_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>

#include "sltx/phase.hpp"

namespace sltx {

FdMatrix::FdMatrix(int n_total, int kl, int ku)
    : n_(n_total)
    , kl_(kl)
    , ku_(ku)
    , rows_(2 * kl + ku + 1)
    , band_(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(n_total), 0.0)
{
}

double&
FdMatrix::at(int i, int j)
{
    const int r = kl_ + ku_ + i - j;
    return band_[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
}

double
FdMatrix::at(int i, int j) const
{
    const int r = kl_ + ku_ + i - j;
    if (r < 0 || r >= rows_) return 0.0;
    return band_[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)];
}

std::vector<double>
FdMatrix::to_dense() const
{
    std::vector<double> dense(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
        for (int i = std::max(0, j - ku_ - kl_); i <= std::min(n_ - 1, j + kl_); ++i) {
            dense[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = at(i, j);
        }
    }
    return dense;
}

void
FdMatrix::zero()
{
    std::fill(band_.begin(), band_.end(), 0.0);
}

FdMatrix::Det
FdMatrix::lu_det()
{
    // Banded LU with partial pivoting; fill stays within kl + ku
    // superdiagonals, which the storage already provides.
    int sign = 1;
    double log_abs = 0.0;
    const int width = kl_ + ku_;
    for (int k = 0; k < n_; ++k) {
        int pivot = k;
        double best = std::abs(at(k, k));
        for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i) {
            const double v = std::abs(at(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0) {
            return {0, -std::numeric_limits<double>::infinity()};
        }
        if (pivot != k) {
            sign = -sign;
            for (int j = k; j <= std::min(n_ - 1, k + width); ++j) {
                std::swap(at(k, j), at(pivot, j));
            }
        }
        const double diag = at(k, k);
        sign = diag < 0.0 ? -sign : sign;
        log_abs += std::log(std::abs(diag));
        for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i) {
            const double l = at(i, k) / diag;
            if (l == 0.0) continue;
            for (int j = k + 1; j <= std::min(n_ - 1, k + width); ++j) {
                at(i, j) -= l * at(k, j);
            }
        }
    }
    return {sign, log_abs};
}

FdMatrix
assemble(const Problem& problem, double lambda, int m)
{
    if (m < 16) {
        throw BadInput("fd mesh needs at least 16 nodes per segment");
    }
    FdMatrix M(4 * m, 3, 2);
    assemble_into(M, problem, lambda, m);
    return M;
}

void
assemble_into(FdMatrix& M, const Problem& problem, double lambda, int m)
{
    const int n = 4 * m;
    if (M.size() != n) {
        throw BadInput("scratch matrix size does not match the mesh");
    }
    M.zero();

    std::array<double, 4> dx{};
    for (int s = 0; s < 4; ++s) {
        dx[static_cast<std::size_t>(s)] = problem.segment_length(s) / (m - 1);
    }

    // Interior rows.
    for (int s = 0; s < 4; ++s) {
        const double step = dx[static_cast<std::size_t>(s)];
        const double p2_over_h2 = problem.p_squared(s) / (step * step);
        const double a = problem.segment_begin(s);
        for (int j = 1; j <= m - 2; ++j) {
            const int i = s * m + j;
            const double x = a + step * j;
            M.at(i, i - 1) = -p2_over_h2;
            M.at(i, i) = 2.0 * p2_over_h2 + problem.q_at(s, x) - lambda;
            M.at(i, i + 1) = -p2_over_h2;
        }
    }

    // Left boundary condition at node 0 (one-sided 3-point derivative).
    {
        const LeftBc& bc = problem.spec().left_bc;
        const double inv2h = 1.0 / (2.0 * dx[0]);
        M.at(0, 0) = bc.alpha1 - 3.0 * bc.alpha2 * inv2h;
        M.at(0, 1) = 4.0 * bc.alpha2 * inv2h;
        M.at(0, 2) = -bc.alpha2 * inv2h;
    }

    // Interface rows: one value and one derivative relation per interface.
    for (int k = 0; k < 3; ++k) {
        const TransmissionBlock& t = problem.spec().trans[static_cast<std::size_t>(k)];
        const int e = (k + 1) * m - 1; // last node of segment k
        const int b = (k + 1) * m;     // first node of segment k+1
        const double inv2l = 1.0 / (2.0 * dx[static_cast<std::size_t>(k)]);
        const double inv2r = 1.0 / (2.0 * dx[static_cast<std::size_t>(k) + 1]);

        M.at(e, b) = 1.0;
        M.at(e, e) = -t.a - 3.0 * t.b * inv2l;
        M.at(e, e - 1) = 4.0 * t.b * inv2l;
        M.at(e, e - 2) = -t.b * inv2l;

        M.at(b, b) = -3.0 * inv2r;
        M.at(b, b + 1) = 4.0 * inv2r;
        M.at(b, b + 2) = -inv2r;
        M.at(b, e) = -t.c - 3.0 * t.d * inv2l;
        M.at(b, e - 1) = 4.0 * t.d * inv2l;
        M.at(b, e - 2) = -t.d * inv2l;
    }

    // Right boundary condition at the last node, affine in lambda.
    {
        const RightBc& bc = problem.spec().right_bc;
        const int last = n - 1;
        const double inv2h = 1.0 / (2.0 * dx[3]);
        const double cu = lambda * bc.beta1p + bc.beta1;   // coefficient of u(1)
        const double cdu = lambda * bc.beta2p + bc.beta2;  // coefficient of u'(1)
        M.at(last, last) = cu - 3.0 * cdu * inv2h;
        M.at(last, last - 1) = 4.0 * cdu * inv2h;
        M.at(last, last - 2) = -cdu * inv2h;
    }
}

std::vector<DetSample>
det_grid(const Problem& problem, std::span<const double> lambdas, int m)
{
    if (m < 16) {
        throw BadInput("fd mesh needs at least 16 nodes per segment");
    }
    std::vector<DetSample> out(lambdas.size());
    std::vector<std::exception_ptr> errors(lambdas.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(lambdas.size());
#pragma omp parallel
    {
        FdMatrix scratch(4 * m, 3, 2);
#pragma omp for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            try {
                assemble_into(scratch, problem, lambdas[k], m);
                const FdMatrix::Det d = scratch.lu_det();
                out[k] = {d.sign, d.log_abs};
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<DetSample>
det_grid_serial(const Problem& problem, std::span<const double> lambdas, int m)
{
    if (m < 16) {
        throw BadInput("fd mesh needs at least 16 nodes per segment");
    }
    std::vector<DetSample> out(lambdas.size());
    FdMatrix scratch(4 * m, 3, 2);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        assemble_into(scratch, problem, lambdas[i], m);
        const FdMatrix::Det d = scratch.lu_det();
        out[i] = {d.sign, d.log_abs};
    }
    return out;
}

namespace {

int
det_sign(const Problem& problem, double lambda, int m)
{
    FdMatrix M = assemble(problem, lambda, m);
    return M.lu_det().sign;
}

double
bisect_sign_change(const Problem& problem, int m, double lo, double hi, int sign_lo)
{
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        const int s = det_sign(problem, mid, m);
        if (s == 0) {
            return mid;
        }
        if (s == sign_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<double>
oracle_eigenvalues(const Problem& problem, int count, int m, double lo, double hi)
{
    const PhaseModel model = make_phase_model(problem);
    const std::vector<double> grid = phase_grid(model, lo, hi);
    const std::vector<DetSample> dets = det_grid(problem, grid, m);

    struct Bracket {
        double lo, hi;
        int sign_lo;
        bool exact; // det vanished exactly at lo
    };
    std::vector<Bracket> brackets;
    int prev_sign = dets[0].sign;
    double prev_lambda = grid[0];
    if (prev_sign == 0) {
        brackets.push_back({grid[0], grid[0], 0, true});
    }
    for (std::size_t i = 1; i < grid.size() && brackets.size() < static_cast<std::size_t>(count); ++i) {
        const int s = dets[i].sign;
        if (s == 0) {
            brackets.push_back({grid[i], grid[i], 0, true});
        } else if (prev_sign != 0 && s != prev_sign) {
            brackets.push_back({prev_lambda, grid[i], prev_sign, false});
        }
        if (s != 0) {
            prev_sign = s;
            prev_lambda = grid[i];
        }
    }

    std::vector<double> roots(brackets.size());
    std::vector<std::exception_ptr> errors(brackets.size());
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(brackets.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < nb; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            const Bracket& b = brackets[k];
            roots[k] = b.exact ? b.lo : bisect_sign_change(problem, m, b.lo, b.hi, b.sign_lo);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::sort(roots.begin(), roots.end());
    if (roots.size() < static_cast<std::size_t>(count)) {
        throw ScanExhausted(roots, static_cast<std::size_t>(count), hi);
    }
    return roots;
}

int
count_sign_changes(const Problem& problem, int m, double lo, double hi)
{
    const PhaseModel model = make_phase_model(problem);
    const std::vector<double> grid = phase_grid(model, lo, hi);
    const std::vector<DetSample> dets = det_grid(problem, grid, m);
    int count = 0;
    int prev = 0;
    for (const DetSample& d : dets) {
        if (d.sign == 0) {
            ++count;
        } else {
            if (prev != 0 && d.sign != prev) {
                ++count;
            }
            prev = d.sign;
        }
    }
    return count;
}

} // namespace sltx

#include "sltx/hilbert.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>

namespace sltx {

namespace {

void
check_same_grid(const HElement& a, const HElement& b)
{
    if (a.grid == b.grid) return;
    if (!a.grid || !b.grid) throw GridMismatch();
    for (std::size_t s = 0; s < 4; ++s) {
        if (a.f[s].size() != b.f[s].size()) throw GridMismatch();
    }
}

std::string
fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::shared_ptr<const Grid>
make_grid(const Problem& problem, std::size_t nodes_per_segment)
{
    if (nodes_per_segment < 3 || nodes_per_segment % 2 == 0) {
        throw BadInput("nodes_per_segment must be odd and at least 3");
    }
    auto grid = std::make_shared<Grid>();
    grid->nodes_per_segment = nodes_per_segment;
    for (int s = 0; s < 4; ++s) {
        const double a = problem.segment_begin(s);
        const double b = problem.segment_end(s);
        const std::size_t n = nodes_per_segment;
        auto& x = grid->x[static_cast<std::size_t>(s)];
        auto& w = grid->simpson[static_cast<std::size_t>(s)];
        x.resize(n);
        w.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
        }
        x.front() = a;
        x.back() = b;
        const double step = (b - a) / static_cast<double>(n - 1);
        w.front() = w.back() = step / 3.0;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            w[k] = (k % 2 == 1 ? 4.0 : 2.0) * step / 3.0;
        }
    }
    return grid;
}

HElement
zero_element(std::shared_ptr<const Grid> grid)
{
    HElement e;
    for (std::size_t s = 0; s < 4; ++s) {
        e.f[s].assign(grid->nodes_per_segment, 0.0);
    }
    e.grid = std::move(grid);
    return e;
}

void
add_scaled(double a, const HElement& x, HElement& y)
{
    check_same_grid(x, y);
    for (std::size_t s = 0; s < 4; ++s) {
        for (std::size_t k = 0; k < x.f[s].size(); ++k) {
            y.f[s][k] += a * x.f[s][k];
        }
    }
    y.h += a * x.h;
}

double
inner_product_H1(const Problem& problem, const HElement& f, const HElement& g)
{
    check_same_grid(f, g);
    const Grid& grid = *f.grid;
    double total = 0.0;
    for (int s = 0; s < 4; ++s) {
        const auto& w = grid.simpson[static_cast<std::size_t>(s)];
        const auto& a = f.f[static_cast<std::size_t>(s)];
        const auto& b = g.f[static_cast<std::size_t>(s)];
        double acc = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            acc += w[k] * (a[k] * b[k]); // grouping keeps the product symmetric bit-for-bit
        }
        total += problem.segment_weight(s) * acc;
    }
    return total;
}

double
inner_product_H(const Problem& problem, const HElement& F, const HElement& G)
{
    return inner_product_H1(problem, F, G) + problem.scalar_weight() * (F.h * G.h);
}

double
norm_H(const Problem& problem, const HElement& F)
{
    return std::sqrt(inner_product_H(problem, F, F));
}

BoundaryFunctionals
boundary_functionals(const Problem& problem, double u_at_1, double du_at_1)
{
    const RightBc& bc = problem.spec().right_bc;
    return {bc.beta1 * u_at_1 - bc.beta2 * du_at_1, bc.beta1p * u_at_1 - bc.beta2p * du_at_1};
}

std::vector<double>
gram_matrix(const Problem& problem, std::span<const HElement> elements)
{
    const std::size_t n = elements.size();
    std::vector<double> g(n * n, 0.0);
    // Flattened upper triangle (i <= j) so iterations are independent.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    std::vector<std::exception_ptr> errors(pairs.size());
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < m; ++k) {
        const auto [i, j] = pairs[static_cast<std::size_t>(k)];
        try {
            const double v = inner_product_H(problem, elements[i], elements[j]);
            g[i * n + j] = v;
            g[j * n + i] = v;
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return g;
}

std::vector<double>
gram_matrix_serial(const Problem& problem, std::span<const HElement> elements)
{
    const std::size_t n = elements.size();
    std::vector<double> g(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = inner_product_H(problem, elements[i], elements[j]);
            g[i * n + j] = v;
            g[j * n + i] = v;
        }
    }
    return g;
}

GramReport
orthogonality_check(const Problem& problem, std::span<const HElement> elements)
{
    GramReport report;
    report.n = elements.size();
    report.gram = gram_matrix(problem, elements);
    for (std::size_t i = 0; i < report.n; ++i) {
        for (std::size_t j = 0; j < report.n; ++j) {
            const double v = report.gram[i * report.n + j];
            if (i == j) {
                report.max_diag_deviation = std::max(report.max_diag_deviation, std::abs(v - 1.0));
            } else {
                report.max_offdiag = std::max(report.max_offdiag, std::abs(v));
            }
        }
    }
    return report;
}

Expansion
expand(const Problem& problem, const HElement& F, std::span<const HElement> phis)
{
    if (phis.empty()) {
        throw BadInput("expansion needs at least one eigen-element");
    }
    const GramReport gram = orthogonality_check(problem, phis);
    if (gram.max_offdiag > 1e-5 || gram.max_diag_deviation > 1e-5) {
        throw NotOrthonormal(std::max(gram.max_offdiag, gram.max_diag_deviation));
    }

    Expansion out;
    out.norm_F = norm_H(problem, F);
    out.coeff.resize(phis.size());
    out.residual.resize(phis.size());
    HElement partial = zero_element(F.grid);
    HElement diff = zero_element(F.grid);
    for (std::size_t n = 0; n < phis.size(); ++n) {
        out.coeff[n] = inner_product_H(problem, F, phis[n]);
        out.coeff_sq_sum += out.coeff[n] * out.coeff[n];
        add_scaled(out.coeff[n], phis[n], partial);
        diff = F;
        add_scaled(-1.0, partial, diff);
        out.residual[n] = norm_H(problem, diff);
    }
    out.reconstruction = std::move(partial);
    return out;
}

void
write_gram_csv(std::ostream& os, const GramReport& report)
{
    os << "m,n,gram\n";
    for (std::size_t i = 0; i < report.n; ++i) {
        for (std::size_t j = 0; j < report.n; ++j) {
            os << (i + 1) << ',' << (j + 1) << ',' << fmt17(report.gram[i * report.n + j]) << '\n';
        }
    }
}

void
write_residual_csv(std::ostream& os, std::span<const double> residual)
{
    os << "N,residual\n";
    for (std::size_t n = 0; n < residual.size(); ++n) {
        os << (n + 1) << ',' << fmt17(residual[n]) << '\n';
    }
}

} // namespace sltx

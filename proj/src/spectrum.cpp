#include "sltx/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "sltx/fd_oracle.hpp"
#include "sltx/phase.hpp"

namespace sltx {

namespace {

constexpr double kPi = 3.141592653589793;

struct Bracket {
    double lo, hi;
    double delta_lo, delta_hi;
    bool exact; // Delta vanished exactly at lo
};

/// Bisection to width 1e-11*max(1,|mu|) followed by one Newton step.
struct RefinedRoot {
    double mu;
    double delta;
};

RefinedRoot
refine_bracket(const Problem& problem, const Bracket& b, const IvpOptions& ivp)
{
    if (b.exact) {
        return {b.lo, 0.0};
    }
    double lo = b.lo, hi = b.hi;
    double delta_lo = b.delta_lo;
    double mid = 0.5 * (lo + hi);
    while (hi - lo > 1e-11 * std::max(1.0, std::abs(mid))) {
        mid = 0.5 * (lo + hi);
        const double d = char_delta(problem, mid, ivp).delta;
        if (d == 0.0) {
            return {mid, 0.0};
        }
        if ((d < 0.0) == (delta_lo < 0.0)) {
            lo = mid;
            delta_lo = d;
        } else {
            hi = mid;
        }
    }
    mid = 0.5 * (lo + hi);
    const DeltaSample at_mid = char_delta(problem, mid, ivp);
    if (at_mid.ddelta != 0.0) {
        const double polished = mid - at_mid.delta / at_mid.ddelta;
        if (polished > b.lo && polished < b.hi) {
            const double d = char_delta(problem, polished, ivp).delta;
            if (std::abs(d) < std::abs(at_mid.delta)) {
                return {polished, d};
            }
        }
    }
    return {mid, at_mid.delta};
}

} // namespace

HElement
eigen_element(const Problem& problem, const PiecewiseSolution& phi, std::shared_ptr<const Grid> grid)
{
    HElement raw;
    raw.grid = grid;
    for (std::size_t s = 0; s < 4; ++s) {
        const SegmentTrajectory& traj = phi.seg[s];
        if (traj.state.size() != grid->nodes_per_segment) {
            throw GridMismatch();
        }
        raw.f[s].resize(traj.state.size());
        for (std::size_t k = 0; k < traj.state.size(); ++k) {
            raw.f[s][k] = traj.state[k].u;
        }
    }
    const Trace& end = phi.trace[kTraceRightEnd];
    raw.h = boundary_functionals(problem, end.u, end.du).Np;

    const double norm = norm_H(problem, raw);
    const Trace& start = phi.trace[kTraceLeftEnd];
    double lead = start.u;
    if (std::abs(lead) <= 1e-12) {
        lead = start.du;
    }
    const double sign = (std::abs(lead) > 1e-12 && lead < 0.0) ? -1.0 : 1.0;
    const double scale = sign / norm;

    HElement out = std::move(raw);
    for (auto& seg : out.f) {
        for (auto& v : seg) v *= scale;
    }
    out.h *= scale;
    return out;
}

std::vector<Eigenpair>
find_eigenvalues(const Problem& problem, int count, const SpectrumOptions& options)
{
    if (count < 1) {
        throw BadInput("eigenvalue count must be at least 1");
    }
    const PhaseModel model = make_phase_model(problem);
    const double start = options.lambda_start.value_or(auto_lambda_start(problem));
    const double phase_budget = (static_cast<double>(count) + options.phase_margin) * kPi;
    const double phase_origin = model.phase(start);

    // Chunked phase-controlled scan; each chunk is evaluated with the
    // parallel grid kernel.
    std::vector<Bracket> brackets;
    double lambda = start;
    double prev_lambda = start;
    double prev_delta = 0.0;
    bool have_prev = false;
    double ceiling_hit = start;
    constexpr std::size_t kChunk = 32;
    while (brackets.size() < static_cast<std::size_t>(count)) {
        std::vector<double> chunk;
        chunk.reserve(kChunk);
        if (!have_prev) {
            chunk.push_back(lambda);
        }
        while (chunk.size() < kChunk) {
            lambda += model.step(lambda);
            if (lambda > options.lambda_ceiling) break;
            chunk.push_back(lambda);
        }
        if (chunk.empty()) break;
        const std::vector<DeltaSample> samples = delta_grid(problem, chunk, options.ivp);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double d = samples[i].delta;
            if (d == 0.0) {
                brackets.push_back({chunk[i], chunk[i], 0.0, 0.0, true});
            } else if (have_prev && prev_delta != 0.0 && (d < 0.0) != (prev_delta < 0.0)) {
                brackets.push_back({prev_lambda, chunk[i], prev_delta, d, false});
            }
            prev_lambda = chunk[i];
            prev_delta = d;
            have_prev = true;
            if (brackets.size() >= static_cast<std::size_t>(count)) break;
        }
        ceiling_hit = prev_lambda;
        if (model.phase(prev_lambda) - phase_origin > phase_budget || lambda > options.lambda_ceiling) {
            break;
        }
    }

    // Refine brackets concurrently; results are ordered by construction.
    std::vector<RefinedRoot> roots(brackets.size());
    std::vector<std::exception_ptr> errors(brackets.size());
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(brackets.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < nb; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            roots[k] = refine_bracket(problem, brackets[k], options.ivp);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    if (roots.size() < static_cast<std::size_t>(count)) {
        std::vector<double> found(roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i) found[i] = roots[i].mu;
        throw ScanExhausted(found, static_cast<std::size_t>(count), ceiling_hit);
    }

    // Root acceptance gate: |Delta(mu)| <= 1e-9*(1+|mu|)*scale with the
    // scale taken from the enclosing bracket endpoints.
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const Bracket& b = brackets[i];
        const double scale = std::max({std::abs(b.delta_lo), std::abs(b.delta_hi), 1e-300});
        const double tol = 1e-9 * (1.0 + std::abs(roots[i].mu)) * scale;
        if (std::abs(roots[i].delta) > tol && options.on_warning) {
            options.on_warning("root " + std::to_string(i + 1) + " at lambda = " + std::to_string(roots[i].mu) +
                               " exceeds the acceptance tolerance");
        }
    }

    auto grid = make_grid(problem, options.grid_nodes);
    std::vector<Eigenpair> pairs(roots.size());
    std::vector<std::exception_ptr> build_errors(roots.size());
    const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(roots.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < np; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            Eigenpair pair;
            pair.index = static_cast<int>(k) + 1;
            pair.mu = roots[k].mu;
            pair.bracket_lo = brackets[k].lo;
            pair.bracket_hi = brackets[k].hi;
            pair.delta_at_root = roots[k].delta;
            pair.phi = left_solution(problem, pair.mu, static_cast<int>(grid->nodes_per_segment), options.ivp);
            pair.element = eigen_element(problem, pair.phi, grid);

            HElement raw;
            raw.grid = grid;
            for (std::size_t s = 0; s < 4; ++s) {
                raw.f[s].resize(pair.phi.seg[s].state.size());
                for (std::size_t t = 0; t < raw.f[s].size(); ++t) raw.f[s][t] = pair.phi.seg[s].state[t].u;
            }
            const Trace& end = pair.phi.trace[kTraceRightEnd];
            raw.h = boundary_functionals(problem, end.u, end.du).Np;
            pair.norm_H = norm_H(problem, raw);

            const Trace& at_left = pair.phi.trace[kTraceLeftEnd];
            double lead = at_left.u;
            if (std::abs(lead) <= 1e-12) lead = at_left.du;
            const double sign = (std::abs(lead) > 1e-12 && lead < 0.0) ? -1.0 : 1.0;
            pair.scale = sign / pair.norm_H;

            const CharDerivative cd = char_derivative_at_eigenvalue(problem, pair.mu, options.ivp);
            pair.w_prime = cd.w_prime;
            pair.c1 = cd.c1;
            pairs[k] = std::move(pair);
        } catch (...) {
            build_errors[k] = std::current_exception();
        }
    }
    for (const auto& e : build_errors) {
        if (e) std::rethrow_exception(e);
    }

    // Coarse fd cross-count of the scanned window; a mismatch warns but is
    // not an error (the fd mesh shifts eigenvalues by O(m^-2)). The mesh
    // grows with the window's accumulated phase so that the fd dispersion
    // shift stays below the local eigenvalue gaps at deep indices.
    if (options.oracle_guard && options.on_warning) {
        const double hi = pairs.back().mu + 0.3 * model.step(pairs.back().mu);
        const int guard_mesh = std::max(options.oracle_guard_mesh, static_cast<int>(6.0 * model.phase(hi)));
        const int fd_count = count_sign_changes(problem, guard_mesh, start, hi);
        if (fd_count != count) {
            options.on_warning("fd oracle counted " + std::to_string(fd_count) + " roots on the scanned window, " +
                               "shooting found " + std::to_string(count));
        }
    }
    return pairs;
}

SimplicityReport
simplicity_certificate(const Problem& problem, const Eigenpair& pair)
{
    const CharDerivative cd = char_derivative_at_eigenvalue(problem, pair.mu);
    const DeltaSample at_mu = char_delta(problem, pair.mu);
    const DerivedConstants& k = problem.constants();
    const double scaled = cd.w_prime * k.theta * k.gamma * k.xi;

    SimplicityReport report;
    report.mu = pair.mu;
    report.w_prime = cd.w_prime;
    report.c1 = cd.c1;
    report.norm_term = cd.norm_term;
    report.cross_check = std::abs(scaled - at_mu.ddelta) / std::max(std::abs(at_mu.ddelta), 1e-300);
    report.pass = cd.w_prime != 0.0 && report.cross_check <= 1e-4;
    return report;
}

} // namespace sltx

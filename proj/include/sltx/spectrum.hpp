#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sltx/characteristic.hpp"
#include "sltx/hilbert.hpp"

namespace sltx {

/// One computed eigenvalue with its normalized eigen-element and the
/// simplicity data.
struct Eigenpair {
    int index = 0; // 1-based position in the returned sequence
    double mu = 0.0;
    double bracket_lo = 0.0; // original scan bracket, Delta changes sign across it
    double bracket_hi = 0.0;
    double delta_at_root = 0.0;
    PiecewiseSolution phi; // left shooting solution at mu, dense on the element grid
    double norm_H = 0.0;   // H-norm of the un-normalized (phi, N'(phi))
    double scale = 1.0;    // element = scale * phi; carries the sign convention
    HElement element;      // normalized eigen-element
    double w_prime = 0.0;
    double c1 = 0.0;
};

struct SpectrumOptions {
    std::optional<double> lambda_start; // default: auto_lambda_start heuristic
    double lambda_ceiling = std::numeric_limits<double>::infinity();
    double phase_margin = 8.0; // extra pi's of phase beyond `count` before giving up
    std::size_t grid_nodes = 2049;
    bool oracle_guard = true; // coarse fd cross-count of located roots
    int oracle_guard_mesh = 128;
    std::function<void(const std::string&)> on_warning;
    IvpOptions ivp;
};

/// Locates the `count` smallest roots of Delta at or above the start value:
/// phase-controlled scan, bisection of each sign-change bracket to width
/// 1e-11*max(1,|mu|), then one Newton polish using the variational
/// derivative. Results are strictly increasing and deterministic. Throws
/// ScanExhausted (carrying the roots found) when the ceiling is reached.
std::vector<Eigenpair> find_eigenvalues(const Problem& problem, int count, const SpectrumOptions& options = {});

struct SimplicityReport {
    double mu = 0.0;
    double w_prime = 0.0;
    double c1 = 0.0;
    double norm_term = 0.0;   // the strictly positive weighted sum
    double cross_check = 0.0; // |w_prime*theta*gamma*xi - dDelta| / |dDelta|
    bool pass = false;
};

/// Certifies analytic simplicity of a computed eigenvalue: w'(mu) from the
/// closed-form sum must be nonzero and agree with the variational dDelta
/// (scaled by theta*gamma*xi) to 1e-4 relative.
SimplicityReport simplicity_certificate(const Problem& problem, const Eigenpair& pair);

/// Normalized eigen-element (phi, N'(phi)) / ||.||_H built from a dense
/// shooting solution. Sign convention: the first component of
/// (phi(-1), phi'(-1)) with magnitude above 1e-12 is made positive.
HElement eigen_element(const Problem& problem, const PiecewiseSolution& phi, std::shared_ptr<const Grid> grid);

} // namespace sltx

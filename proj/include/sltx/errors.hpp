#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sltx {

/// Base class for all library errors. `code()` is a stable machine-readable
/// tag used by the CLI to build error objects.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what)
        , code_(std::move(code))
    {
    }

    const std::string&
    code() const noexcept
    {
        return code_;
    }

  private:
    std::string code_;
};

struct BadInput : Error {
    explicit BadInput(const std::string& what) : Error("bad_input", what) {}
};

struct DegenerateLeftBc : Error {
    DegenerateLeftBc() : Error("degenerate_left_bc", "left boundary condition is degenerate: alpha1 = alpha2 = 0") {}
};

struct NonPositiveDeterminant : Error {
    NonPositiveDeterminant(std::string which, double value)
        : Error("non_positive_determinant",
                "determinant " + which + " = " + std::to_string(value) + " must be strictly positive")
        , which(std::move(which))
        , value(value)
    {
    }
    std::string which; // "theta", "gamma", "xi" or "rho"
    double value;
};

struct BadInterfaces : Error {
    explicit BadInterfaces(const std::string& what) : Error("bad_interfaces", what) {}
};

struct ZeroLeadingCoefficient : Error {
    explicit ZeroLeadingCoefficient(int segment)
        : Error("zero_leading_coefficient", "p" + std::to_string(segment + 1) + " must be nonzero")
    {
    }
};

struct StepFailure : Error {
    explicit StepFailure(const std::string& what) : Error("step_failure", what) {}
};

struct NotAnEigenvalue : Error {
    NotAnEigenvalue(double mu, double delta)
        : Error("not_an_eigenvalue",
                "lambda = " + std::to_string(mu) + " is not a root of the characteristic function (|Delta| = " +
                    std::to_string(delta) + ")")
    {
    }
};

struct DegenerateTrace : Error {
    DegenerateTrace() : Error("degenerate_trace", "both components of the trace at -1 vanish; integration failure") {}
};

struct GridMismatch : Error {
    GridMismatch() : Error("grid_mismatch", "elements live on different sample grids") {}
};

struct NotOrthonormal : Error {
    explicit NotOrthonormal(double max_offdiag)
        : Error("not_orthonormal",
                "eigen-elements are not orthonormal (max off-diagonal " + std::to_string(max_offdiag) + ")")
    {
    }
};

struct EtaIsEigenvalue : Error {
    EtaIsEigenvalue(double eta, double delta)
        : Error("eta_is_eigenvalue",
                "eta = " + std::to_string(eta) + " is an eigenvalue (|Delta(eta)| = " + std::to_string(delta) + ")")
    {
    }
};

/// Scan hit its ceiling before finding the requested number of roots.
/// Carries the eigenvalues that were located so callers can report them.
struct ScanExhausted : Error {
    ScanExhausted(std::vector<double> found, std::size_t requested, double ceiling)
        : Error("scan_exhausted",
                "located " + std::to_string(found.size()) + " of " + std::to_string(requested) +
                    " requested eigenvalues before reaching the scan ceiling " + std::to_string(ceiling))
        , found(std::move(found))
        , requested(requested)
        , ceiling(ceiling)
    {
    }
    std::vector<double> found;
    std::size_t requested;
    double ceiling;
};

} // namespace sltx

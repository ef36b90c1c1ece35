#pragma once

#include <array>
#include <string>
#include <vector>

#include "sltx/errors.hpp"

namespace sltx {

/// One interface jump relation: the solution to the right of an interface is
/// obtained from the one-sided limits on the left by
///   u(h+0)  = a*u(h-0) + b*u'(h-0)
///   u'(h+0) = c*u(h-0) + d*u'(h-0)
struct TransmissionBlock {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;

    double
    det() const
    {
        return a * d - b * c;
    }
};

/// (value, derivative) pair at a single abscissa.
struct PointState {
    double u = 0.0;
    double du = 0.0;
};

/// Potential q(x), one polynomial per segment, coefficients in ascending
/// degree. Polynomials keep every evaluation exact and leave closed-form
/// test cases available; the interface admits later extension.
struct PotentialSpec {
    std::array<std::vector<double>, 4> coeff;

    double
    eval(int segment, double x) const
    {
        const auto& c = coeff[static_cast<std::size_t>(segment)];
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) {
            v = v * x + c[k];
        }
        return v;
    }

    static PotentialSpec
    zero()
    {
        PotentialSpec q;
        for (auto& c : q.coeff) {
            c = {0.0};
        }
        return q;
    }
};

struct LeftBc {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};

struct RightBc {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta1p = 0.0; // coefficient of lambda*u(1)
    double beta2p = 0.0; // coefficient of lambda*u'(1)
};

/// Raw problem data: equation, boundary and interface coefficients.
struct ProblemSpec {
    std::array<double, 4> p{1.0, 1.0, 1.0, 1.0}; // leading coefficient per segment (enters as p_i^2)
    std::array<double, 3> h{-0.5, 0.0, 0.5};     // interior interface abscissae
    PotentialSpec q = PotentialSpec::zero();
    LeftBc left_bc;
    RightBc right_bc;
    std::array<TransmissionBlock, 3> trans;
};

/// Determinants derived from the interface blocks and the right boundary
/// condition. All four must be strictly positive for a valid problem.
struct DerivedConstants {
    double theta = 1.0; // det of block at h1
    double gamma = 1.0; // det of block at h2
    double xi = 1.0;    // det of block at h3
    double rho = 1.0;   // beta1p*beta2 - beta1*beta2p
};

/// A validated problem. Immutable after construction; safe to share across
/// threads without synchronization.
class Problem {
  public:
    /// Validates a candidate spec and computes the derived constants.
    /// Throws DegenerateLeftBc, NonPositiveDeterminant, BadInterfaces,
    /// ZeroLeadingCoefficient or BadInput (non-finite data).
    static Problem validate(const ProblemSpec& raw);

    const ProblemSpec&
    spec() const
    {
        return spec_;
    }

    const DerivedConstants&
    constants() const
    {
        return consts_;
    }

    double
    segment_begin(int i) const
    {
        return edges_[static_cast<std::size_t>(i)];
    }

    double
    segment_end(int i) const
    {
        return edges_[static_cast<std::size_t>(i) + 1];
    }

    double
    segment_length(int i) const
    {
        return segment_end(i) - segment_begin(i);
    }

    double
    p_squared(int i) const
    {
        const double p = spec_.p[static_cast<std::size_t>(i)];
        return p * p;
    }

    double
    q_at(int segment, double x) const
    {
        return spec_.q.eval(segment, x);
    }

    /// Weight of segment i in the weighted L2 inner product:
    /// 1/p1^2, 1/(p2^2 theta), 1/(p3^2 theta gamma), 1/(p4^2 theta gamma xi).
    double
    segment_weight(int i) const
    {
        return weights_[static_cast<std::size_t>(i)];
    }

    /// Weight of the scalar component: 1/(rho theta gamma xi).
    double
    scalar_weight() const
    {
        return scalar_weight_;
    }

  private:
    Problem() = default;

    ProblemSpec spec_;
    DerivedConstants consts_;
    std::array<double, 5> edges_{};
    std::array<double, 4> weights_{};
    double scalar_weight_ = 1.0;
};

PointState apply_transmission(const TransmissionBlock& block, const PointState& state);

/// Inverse of apply_transmission; well defined because det(block) > 0.
PointState invert_transmission(const TransmissionBlock& block, const PointState& state_plus);

/// JSON problem files. Schema (all keys required):
///   { "p": [4 numbers], "h": [3 numbers], "q": [[...],[...],[...],[...]],
///     "left_bc": {"alpha1": n, "alpha2": n},
///     "right_bc": {"beta1": n, "beta2": n, "beta1p": n, "beta2p": n},
///     "transmission": [{"a":n,"b":n,"c":n,"d":n} x3] }
ProblemSpec parse_problem_json(const std::string& text);
ProblemSpec load_problem_file(const std::string& path);
std::string problem_to_json(const ProblemSpec& spec);

} // namespace sltx

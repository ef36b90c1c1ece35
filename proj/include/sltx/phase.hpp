#pragma once

#include <array>
#include <vector>

#include "sltx/problem.hpp"

namespace sltx {

/// WKB-style phase accounting used to control lambda scan steps: the phase
/// accumulated over the interval is approximately
///   Theta(lambda) = sum_i L_i sqrt(max(lambda - qbar_i, 0)) / |p_i|
/// with qbar_i the mean potential of segment i. Consecutive roots of the
/// characteristic function are about pi apart in Theta, so steps that gain
/// at most pi/2 of phase cannot skip a pair of adjacent roots.
struct PhaseModel {
    std::array<double, 4> qbar{};
    std::array<double, 4> len_over_p{};

    double phase(double lambda) const;
    double velocity(double lambda) const; // dTheta/dlambda
    double step(double lambda) const;     // increment with phase gain <= pi/2
};

PhaseModel make_phase_model(const Problem& problem);

/// Heuristic scan floor: min of q over 101 samples per segment minus
/// 10*(1 + max |q|). The spectrum is bounded below but no constant is
/// available, so this is a documented heuristic backed by the
/// finite-difference cross-count guard.
double auto_lambda_start(const Problem& problem);

/// Phase-controlled grid from `lo` to `hi` inclusive (both endpoints exact).
std::vector<double> phase_grid(const PhaseModel& model, double lo, double hi);

} // namespace sltx

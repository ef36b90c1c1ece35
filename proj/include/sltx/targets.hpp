#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sltx/hilbert.hpp"
#include "sltx/problem.hpp"

namespace sltx {

/// Builtin function family for expansion targets and resolvent right-hand
/// sides. Grammar:
///   poly:[c0,c1,...]x4                 same coefficients on every segment
///   poly:[...],[...],[...],[...]       per-segment coefficient lists
///   gauss:a,b                          exp(-a(x-b)^2)
struct TargetSpec {
    enum class Kind { Polynomial, Gaussian } kind = Kind::Polynomial;
    std::array<std::vector<double>, 4> coeff; // Polynomial
    double gauss_a = 1.0;                     // Gaussian
    double gauss_b = 0.0;

    double value(int segment, double x) const;
    double derivative(int segment, double x) const;
};

TargetSpec parse_target(const std::string& text);

/// Samples the target on the grid. The scalar component defaults to
/// N'(f) = beta1p f(1) - beta2p f'(1) from the one-sided trace at 1 (so the
/// element mirrors domain membership); `scalar_override` replaces it.
HElement sample_target(const Problem& problem, std::shared_ptr<const Grid> grid, const TargetSpec& target,
                       std::optional<double> scalar_override = std::nullopt);

} // namespace sltx

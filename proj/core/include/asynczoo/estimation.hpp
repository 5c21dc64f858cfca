#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "asynczoo/problem.hpp"

namespace asynczoo {

/// Safety factor applied to every probed Lipschitz ratio.
inline constexpr double kLipschitzSafety = 1.5;

/// E_xi ||grad F(x; xi) - grad f(x)||^2 over `n_samples` uniform draws of xi.
/// grad f is the exact mean gradient. Zeroth-order problems need `mu`: both
/// gradients are then replaced by coordinate central differences with that
/// step, which estimates the variance of the smoothed gradients instead.
double estimate_sigma2(const Problem& problem, std::span<const double> x,
                       std::size_t n_samples, std::uint64_t seed,
                       std::optional<double> mu = std::nullopt);

/// Probes gradient differences around random points (power iteration for the
/// global constant, coordinate displacements for the per-coordinate ones),
/// inflates the largest observed ratios by kLipschitzSafety and returns an
/// `estimated` LipschitzInfo. Uses central differences when the problem has
/// no first-order oracle.
LipschitzInfo estimate_lipschitz(const Problem& problem, std::size_t n_probes,
                                 std::uint64_t seed);

/// Central-difference gradient of F(.; xi) with step h.
Vector central_difference_gradient(const Problem& problem, std::span<const double> x,
                                   std::size_t xi, double h);
/// Central-difference gradient of the mean objective with step h.
Vector central_difference_gradient_mean(const Problem& problem, std::span<const double> x,
                                        double h);

}  // namespace asynczoo

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asynczoo/problem.hpp"
#include "asynczoo/stepsize.hpp"

namespace asynczoo {

class RngStream;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SmoothingCheckOptions {
  std::size_t functions = 50;
  std::size_t points = 10;
  std::size_t dim = 4;
  std::vector<double> mus{1e-1, 1e-2, 1e-3};
  std::size_t quad_nodes = 129;
  std::uint64_t seed = 1;
};

/// Coordinate smoothing bounds on seeded smooth test functions:
///   |p_i(x) - p(x)| <= L_(i) mu^2 / 2,
///   |d_i p_i(x) - d_i p(x)| <= L_(i) mu / 2,
///   mean_i |d_i p_i(x) - d_i p(x)|^2 <= omega / 4,
/// and midpoint convexity of p_i for convex p.
std::vector<CheckResult> check_smoothing_bounds(const SmoothingCheckOptions& options);

/// A random configuration with a monotone block-Lipschitz profile and
/// staleness within max_staleness.
RunConfig random_run_config(RngStream& rng);

/// Over `n_configs` random configurations: the closed-form step size equals
/// the factored form built from balanced_chi, and gamma_scale times it is
/// admissible.
CheckResult check_step_size_theory(std::size_t n_configs, std::uint64_t seed,
                                   double gamma_scale = 1.0);

/// Admissibility of `plan`'s step size scaled by gamma_scale.
CheckResult check_plan_admissible(const StepPlan& plan, double gamma_scale = 1.0);

/// Admissibility of the largest step size the theory allows for plan.config
/// (chi at its floor), scaled by gamma_scale.
CheckResult check_floor_admissible(const StepPlan& plan, double gamma_scale = 1.0);

/// Simulated serial run (every iterate observed): the measured
/// (1/K) sum_k ||grad f(x_k)||^2 must not exceed plan.rate_bound.
CheckResult check_convergence(const Problem& problem, const StepPlan& plan,
                              std::uint64_t iterations, std::uint64_t seed);

}  // namespace asynczoo

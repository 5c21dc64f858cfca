#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asynczoo/problem.hpp"
#include "asynczoo/zeroth_order.hpp"

namespace asynczoo {

enum class Variant { generic, ascd, asgd_consistent, asgd_inconsistent, aszd };

std::string_view to_string(Variant v) noexcept;
/// Accepts the names produced by to_string; throws ValidationError otherwise.
Variant parse_variant(std::string_view name);

/// Everything the step-size analysis consumes for one run.
struct RunConfig {
  std::size_t dim = 1;                // N
  std::size_t block = 1;              // Y, coordinates updated per step
  std::uint64_t iterations = 1;       // K
  std::uint64_t staleness = 0;        // T, bound on the age of missed updates
  double sigma2 = 0.0;                // gradient variance bound
  double omega = 0.0;                 // zeroth-order smoothing error term
  double f0_minus_fstar = 1.0;        // f(x0) - f*
  double lipschitz_global = 1.0;      // L
  double lipschitz_block = 1.0;       // L_s at s = block
  double lipschitz_staleness = 1.0;   // L_s at s = staleness (s = 1 when staleness is 0)
  double lipschitz_max = 1.0;         // max per-coordinate constant

  /// Throws ValidationError when a field is out of its domain or the chain
  /// lipschitz_max <= lipschitz_block, lipschitz_staleness <= lipschitz_global fails.
  void validate() const;
};

/// Fills the Lipschitz fields of `cfg` from `info` for the configured block
/// size and staleness.
void apply_lipschitz(RunConfig& cfg, const LipschitzInfo& info);

struct Constants {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
};

/// The three global constants of the convergence analysis.
///   alpha1 = 4 + 4 (T Y + Y^{3/2} T^2 / sqrt(N)) L_T^2 / (L_Y^2 N)
///   alpha2 = Y / ((f(x0) - f*) L_Y N)
///   alpha3 = (K (N omega + sigma^2) alpha2 + 4) L_Y^2 / L_T^2
Constants constants(const RunConfig& cfg);

/// chi = sqrt(alpha1^2 / (K q alpha2 + alpha1)) + sqrt(K q alpha2), q = N omega + sigma^2.
double balanced_chi(const RunConfig& cfg);

/// Smallest admissible chi for step_size_from_chi:
///   1 + sqrt(1 + (L_T^2 / L_Y^2) (Y / N + Y^{3/2} T / N^{3/2}) T).
double chi_floor(const RunConfig& cfg);

/// gamma = (Y / N) / (2 L_Y chi). Throws ValidationError below chi_floor.
double step_size_from_chi(const RunConfig& cfg, double chi);

/// The constant step size with linear-speedup guarantee:
///   1 / gamma = 2 L_Y N / Y * balanced_chi(cfg).
double generic_step_size(const RunConfig& cfg);

/// Staleness ceiling (sqrt(N) / (2 sqrt(Y))) (sqrt(1 + 4 sqrt(N / Y) alpha3) - 1).
double max_staleness(const RunConfig& cfg);

/// Theta for a constant step size under the worst-case missed-update sets
/// (|J| = T, so the inner sum over J \ {k} has T - 1 terms).
double theta_margin(const RunConfig& cfg, double gamma);
/// theta_margin(cfg, gamma) >= 0, up to a relative rounding tolerance.
bool step_size_admissible(const RunConfig& cfg, double gamma);

/// Upper bound on (1/K) sum_k E||grad f(x_k)||^2 for generic_step_size:
///   20 / (K a2) + (1 / (K a2)) ((L_T^2 / L_Y^2) (sqrt(1 + 4 sqrt(N/Y) a3) - 1) / sqrt(N / Y)
///   + 11 sqrt(q) sqrt(K a2)) + N omega.
/// Throws PrerequisiteViolated when T exceeds max_staleness.
double rate_bound(const RunConfig& cfg);

/// Largest finite-difference step the zeroth-order rate tolerates (hidden
/// constant taken as 1): 1/sqrt(K) + min(sqrt(sigma) (N K)^{-1/4}, sigma / sqrt(N)).
double zeroth_order_step_bound(std::size_t dim, std::uint64_t iterations, double sigma2);

struct PlanRequest {
  Variant variant = Variant::generic;
  LipschitzInfo lipschitz;
  double f0_minus_fstar = 1.0;
  std::uint64_t iterations = 1;
  std::uint64_t staleness = 0;
  double sigma2 = 0.0;
  /// Finite-difference steps; required meaning for aszd (defaulted when
  /// absent), optional for generic, rejected for the first-order variants.
  std::optional<MuVector> mu;
  /// Coordinates per step for the generic variant (default 1).
  std::optional<std::size_t> block;
  /// Replaces the computed step size; admissibility is still checked.
  std::optional<double> gamma;
};

/// Fills lipschitz and f0_minus_fstar (from the problem's initial point and
/// optimal value) for `problem`.
PlanRequest request_for(const Problem& problem, Variant variant, std::uint64_t iterations,
                        std::uint64_t staleness, double sigma2);

struct StepPlan {
  Variant variant = Variant::generic;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double gamma = 0.0;
  double t_max = 0.0;
  bool theta_ok = false;
  /// +infinity when the staleness exceeds t_max.
  double rate_bound = 0.0;

  RunConfig config;
  /// Present iff the run uses the zeroth-order estimator.
  std::optional<MuVector> mu;
  bool gamma_overridden = false;
  std::vector<std::string> warnings;

  bool zeroth_order() const noexcept { return mu.has_value(); }
};

/// Resolves the variant's forced parameters, computes the step size and
/// every derived constant, and checks the prerequisites. Contradictory
/// requests (e.g. mu for a first-order variant) throw ValidationError;
/// soft violations are reported through `warnings`.
StepPlan make_plan(const PlanRequest& request);

}  // namespace asynczoo

#include "asynczoo/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asynczoo/delay_model.hpp"
#include "asynczoo/engine.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"
#include "asynczoo/zeroth_order.hpp"

namespace asynczoo {

namespace {

// Rounding allowance on top of each analytic bound.
double slack(double scale) { return 1e-12 * (1.0 + std::abs(scale)); }

double log_uniform(RngStream& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

std::string worst(double excess) {
  std::ostringstream msg;
  msg.precision(3);
  msg << "worst excess over bound " << excess;
  return msg.str();
}

}  // namespace

std::vector<CheckResult> check_smoothing_bounds(const SmoothingCheckOptions& options) {
  CheckResult value{"smoothing value bound", true, ""};
  CheckResult gradient{"smoothing gradient bound", true, ""};
  CheckResult averaged{"smoothing averaged gradient bound", true, ""};
  CheckResult convexity{"smoothing preserves convexity", true, ""};
  double value_excess = -1e300, grad_excess = -1e300, avg_excess = -1e300, convex_excess = -1e300;
  std::size_t cases = 0;

  RngStream rng(options.seed, 41);
  for (std::size_t f = 0; f < options.functions; ++f) {
    const bool convex = f % 2 == 0;
    const auto p = make_smooth_test_function(options.dim, options.seed * 1000 + f, convex);
    const LipschitzInfo& lip = p->lipschitz();
    for (std::size_t s = 0; s < options.points; ++s) {
      Vector x(options.dim), y(options.dim), mid(options.dim);
      for (std::size_t i = 0; i < options.dim; ++i) {
        x[i] = 2.0 * rng.normal();
        y[i] = 2.0 * rng.normal();
        mid[i] = 0.5 * (x[i] + y[i]);
      }
      const double px = p->eval(x, 0);
      for (double mu : options.mus) {
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < options.dim; ++i) {
          const double li = lip.coordinate(i);
          const double pi = smoothed_value(*p, x, 0, i, mu, options.quad_nodes);
          value_excess = std::max(value_excess, std::abs(pi - px) - li * mu * mu / 2.0 - slack(px));

          const double gi = smoothed_grad_coord(*p, x, 0, i, mu);
          const double d = gi - p->partial(x, 0, i);
          grad_excess = std::max(grad_excess, std::abs(d) - li * mu / 2.0 - slack(px) / mu);
          sum_sq += d * d;

          if (convex) {
            const double a = smoothed_value(*p, x, 0, i, mu, options.quad_nodes);
            const double b = smoothed_value(*p, y, 0, i, mu, options.quad_nodes);
            const double m = smoothed_value(*p, mid, 0, i, mu, options.quad_nodes);
            convex_excess = std::max(convex_excess, m - 0.5 * (a + b) - slack(std::max(a, b)));
          }
          ++cases;
        }
        const double bound = omega(lip, MuVector::uniform(options.dim, mu)) / 4.0;
        avg_excess = std::max(avg_excess,
                              sum_sq / static_cast<double>(options.dim) - bound - slack(bound));
      }
    }
  }
  value.passed = value_excess <= 0.0;
  gradient.passed = grad_excess <= 0.0;
  averaged.passed = avg_excess <= 0.0;
  convexity.passed = convex_excess <= 0.0;
  value.detail = std::to_string(cases) + " cases; " + worst(value_excess);
  gradient.detail = std::to_string(cases) + " cases; " + worst(grad_excess);
  averaged.detail = worst(avg_excess);
  convexity.detail = worst(convex_excess);
  return {value, gradient, averaged, convexity};
}

RunConfig random_run_config(RngStream& rng) {
  for (;;) {
    RunConfig cfg;
    cfg.dim = 1 + rng.below(200);
    cfg.block = 1 + rng.below(cfg.dim);
    cfg.iterations = static_cast<std::uint64_t>(log_uniform(rng, 1.0, 1e7));
    cfg.sigma2 = rng.uniform01() < 0.3 ? 0.0 : log_uniform(rng, 1e-4, 10.0);
    cfg.omega = rng.uniform01() < 0.5 ? 0.0 : log_uniform(rng, 1e-8, 1e-1);
    cfg.f0_minus_fstar = log_uniform(rng, 1e-2, 1e2);

    // L_s = min(L, L_max s^p): nondecreasing in s, chain-respecting.
    const double l_max = log_uniform(rng, 0.1, 10.0);
    const double power = rng.uniform01();
    const double l = l_max * std::pow(static_cast<double>(cfg.dim), power) *
                     rng.uniform(0.5, 1.0);
    auto l_s = [&](std::uint64_t s) {
      return std::max(l_max, std::min(l, l_max * std::pow(static_cast<double>(s), power)));
    };
    cfg.lipschitz_max = l_max;
    cfg.lipschitz_global = std::max(l, l_max);
    cfg.lipschitz_block = l_s(cfg.block);

    cfg.staleness = 0;
    cfg.lipschitz_staleness = l_s(1);
    if (rng.uniform01() < 0.8) {
      cfg.staleness = rng.below(2 * static_cast<std::uint64_t>(std::sqrt(cfg.dim)) + 2);
      cfg.lipschitz_staleness = l_s(std::max<std::uint64_t>(1, cfg.staleness));
    }
    if (static_cast<double>(cfg.staleness) <= max_staleness(cfg)) return cfg;
  }
}

CheckResult check_step_size_theory(std::size_t n_configs, std::uint64_t seed, double gamma_scale) {
  CheckResult result{"step size theory", true, ""};
  RngStream rng(seed, 43);
  double worst_rel = 0.0;
  std::size_t inadmissible = 0;
  for (std::size_t c = 0; c < n_configs; ++c) {
    const RunConfig cfg = random_run_config(rng);
    const double gamma = generic_step_size(cfg);
    const double factored = step_size_from_chi(cfg, balanced_chi(cfg));
    worst_rel = std::max(worst_rel, std::abs(gamma - factored) / gamma);
    if (!step_size_admissible(cfg, gamma_scale * gamma)) ++inadmissible;
  }
  result.passed = worst_rel <= 1e-12 && inadmissible == 0;
  std::ostringstream msg;
  msg << n_configs << " configs; factorization max rel diff " << worst_rel << "; "
      << inadmissible << " inadmissible at gamma x " << gamma_scale;
  result.detail = msg.str();
  return result;
}

CheckResult check_plan_admissible(const StepPlan& plan, double gamma_scale) {
  CheckResult result{"step size admissible", false, ""};
  const double gamma = gamma_scale * plan.gamma;
  result.passed = step_size_admissible(plan.config, gamma);
  std::ostringstream msg;
  msg.precision(6);
  msg << "gamma " << gamma << ", margin " << theta_margin(plan.config, gamma)
      << ", staleness " << plan.config.staleness;
  result.detail = msg.str();
  return result;
}

CheckResult check_floor_admissible(const StepPlan& plan, double gamma_scale) {
  const double largest = step_size_from_chi(plan.config, chi_floor(plan.config));
  CheckResult result{"largest theory step size admissible", false, ""};
  const double gamma = gamma_scale * largest;
  result.passed = step_size_admissible(plan.config, gamma);
  std::ostringstream msg;
  msg.precision(6);
  msg << "gamma " << gamma << ", margin " << theta_margin(plan.config, gamma);
  result.detail = msg.str();
  return result;
}

CheckResult check_convergence(const Problem& problem, const StepPlan& plan,
                              std::uint64_t iterations, std::uint64_t seed) {
  CheckResult result{"ergodic gradient norm within rate bound", false, ""};
  double sum = 0.0;
  RunOptions options;
  options.iterations = iterations;
  options.seed = seed;
  options.force = true;
  options.compute_traces = false;
  const DelayModel delay =
      plan.config.staleness > 0 ? DelayModel::fixed(plan.config.staleness) : DelayModel::none();
  run_simulated(problem, plan, delay, options,
                [&](const StepEvent& e) { sum += grad_norm_sq(problem, e.x); });
  const double measured = sum / static_cast<double>(iterations);
  result.passed = measured <= plan.rate_bound;
  std::ostringstream msg;
  msg.precision(6);
  msg << "measured " << measured << " vs bound " << plan.rate_bound << " over " << iterations
      << " steps";
  result.detail = msg.str();
  return result;
}

}  // namespace asynczoo

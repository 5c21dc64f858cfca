#include "asynczoo/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "asynczoo/error.hpp"

namespace asynczoo {

namespace {

constexpr double kRelativeTolerance = 1e-12;

double as_double(std::uint64_t v) { return static_cast<double>(v); }

// N omega + sigma^2
double noise_level(const RunConfig& cfg) {
  return as_double(cfg.dim) * cfg.omega + cfg.sigma2;
}

}  // namespace

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::generic: return "generic";
    case Variant::ascd: return "ascd";
    case Variant::asgd_consistent: return "asgd_consistent";
    case Variant::asgd_inconsistent: return "asgd_inconsistent";
    case Variant::aszd: return "aszd";
  }
  return "generic";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::generic, Variant::ascd, Variant::asgd_consistent,
                    Variant::asgd_inconsistent, Variant::aszd}) {
    if (name == to_string(v)) return v;
  }
  throw ValidationError("unknown variant '" + std::string(name) +
                        "' (expected generic, ascd, asgd_consistent, asgd_inconsistent or aszd)");
}

void RunConfig::validate() const {
  if (dim == 0) throw ValidationError("RunConfig: dim must be >= 1");
  if (block == 0 || block > dim) throw ValidationError("RunConfig: block must be in [1, dim]");
  if (iterations == 0) throw ValidationError("RunConfig: iterations must be >= 1");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw ValidationError("RunConfig: sigma2 must be >= 0");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw ValidationError("RunConfig: omega must be >= 0");
  if (!(f0_minus_fstar > 0.0) || !std::isfinite(f0_minus_fstar)) {
    throw ValidationError("RunConfig: f(x0) - f* must be > 0");
  }
  if (!(lipschitz_max > 0.0)) throw ValidationError("RunConfig: Lipschitz constants must be > 0");
  const double slack = kRelativeTolerance * lipschitz_global;
  const bool chain = lipschitz_max <= lipschitz_block + slack &&
                     lipschitz_block <= lipschitz_global + slack &&
                     lipschitz_max <= lipschitz_staleness + slack &&
                     lipschitz_staleness <= lipschitz_global + slack;
  if (!chain) {
    throw ValidationError("RunConfig: Lipschitz chain L_max <= L_Y, L_T <= L violated");
  }
}

void apply_lipschitz(RunConfig& cfg, const LipschitzInfo& info) {
  cfg.lipschitz_global = info.global();
  cfg.lipschitz_max = info.max_coordinate();
  cfg.lipschitz_block = info.block(cfg.block);
  cfg.lipschitz_staleness = info.block(std::max<std::uint64_t>(1, cfg.staleness));
}

Constants constants(const RunConfig& cfg) {
  cfg.validate();
  const double n = as_double(cfg.dim);
  const double y = as_double(cfg.block);
  const double t = as_double(cfg.staleness);
  const double k = as_double(cfg.iterations);
  const double ly = cfg.lipschitz_block;
  const double lt = cfg.lipschitz_staleness;

  Constants c;
  c.alpha1 = 4.0 + 4.0 * (t * y + std::pow(y, 1.5) * t * t / std::sqrt(n)) * lt * lt / (ly * ly * n);
  c.alpha2 = y / (cfg.f0_minus_fstar * ly * n);
  c.alpha3 = (k * noise_level(cfg) * c.alpha2 + 4.0) * ly * ly / (lt * lt);
  return c;
}

double balanced_chi(const RunConfig& cfg) {
  const Constants c = constants(cfg);
  const double drift = as_double(cfg.iterations) * noise_level(cfg) * c.alpha2;
  return std::sqrt(c.alpha1 * c.alpha1 / (drift + c.alpha1)) + std::sqrt(drift);
}

double chi_floor(const RunConfig& cfg) {
  cfg.validate();
  const double n = as_double(cfg.dim);
  const double y = as_double(cfg.block);
  const double t = as_double(cfg.staleness);
  const double ratio = cfg.lipschitz_staleness / cfg.lipschitz_block;
  return std::sqrt(1.0 + ratio * ratio * (y / n + std::pow(y, 1.5) * t / std::pow(n, 1.5)) * t) +
         1.0;
}

double step_size_from_chi(const RunConfig& cfg, double chi) {
  const double floor = chi_floor(cfg);
  if (!(chi >= floor * (1.0 - kRelativeTolerance))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "chi = " << chi << " is below the admissible floor " << floor;
    throw ValidationError(msg.str());
  }
  return (as_double(cfg.block) / as_double(cfg.dim)) / (2.0 * cfg.lipschitz_block * chi);
}

double generic_step_size(const RunConfig& cfg) {
  const double inverse = 2.0 * cfg.lipschitz_block * as_double(cfg.dim) /
                         as_double(cfg.block) * balanced_chi(cfg);
  return 1.0 / inverse;
}

double max_staleness(const RunConfig& cfg) {
  const Constants c = constants(cfg);
  const double n = as_double(cfg.dim);
  const double y = as_double(cfg.block);
  return std::sqrt(n) / (2.0 * std::sqrt(y)) *
         (std::sqrt(1.0 + 4.0 * std::sqrt(n / y) * c.alpha3) - 1.0);
}

double theta_margin(const RunConfig& cfg, double gamma) {
  cfg.validate();
  const double n = as_double(cfg.dim);
  const double y = as_double(cfg.block);
  const double t = as_double(cfg.staleness);
  const double ly = cfg.lipschitz_block;
  const double lt = cfg.lipschitz_staleness;

  double delay_term = 0.0;
  if (cfg.staleness > 0) {
    // sum over nu = 1..T of gamma (gamma Y + Y^{3/2} (T - 1) gamma / sqrt(N))
    const double per_step = gamma * (gamma * y + std::pow(y, 1.5) * (t - 1.0) * gamma / std::sqrt(n));
    delay_term = 2.0 * lt * lt * (n * n / (y * y)) * gamma * t * per_step;
  }
  return n * gamma / 2.0 - 2.0 * gamma * gamma * (ly / y) * n * n - delay_term;
}

bool step_size_admissible(const RunConfig& cfg, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) return false;
  const double leading = as_double(cfg.dim) * gamma / 2.0;
  return theta_margin(cfg, gamma) >= -kRelativeTolerance * leading;
}

double rate_bound(const RunConfig& cfg) {
  const double ceiling = max_staleness(cfg);
  const double t = as_double(cfg.staleness);
  if (t > ceiling * (1.0 + kRelativeTolerance)) {
    std::ostringstream msg;
    msg << "staleness " << cfg.staleness << " exceeds the ceiling " << ceiling;
    throw PrerequisiteViolated(msg.str());
  }
  const Constants c = constants(cfg);
  const double n = as_double(cfg.dim);
  const double y = as_double(cfg.block);
  const double k = as_double(cfg.iterations);
  const double q = noise_level(cfg);
  const double ratio = cfg.lipschitz_staleness / cfg.lipschitz_block;
  const double ka2 = k * c.alpha2;
  const double delay = ratio * ratio *
                       (std::sqrt(1.0 + 4.0 * std::sqrt(n / y) * c.alpha3) - 1.0) / std::sqrt(n / y);
  return 20.0 / ka2 + (delay + 11.0 * std::sqrt(q) * std::sqrt(ka2)) / ka2 + n * cfg.omega;
}

double zeroth_order_step_bound(std::size_t dim, std::uint64_t iterations, double sigma2) {
  const double n = static_cast<double>(dim);
  const double k = as_double(iterations);
  const double sigma = std::sqrt(std::max(0.0, sigma2));
  return 1.0 / std::sqrt(k) + std::min(std::sqrt(sigma) * std::pow(n * k, -0.25), sigma / std::sqrt(n));
}

PlanRequest request_for(const Problem& problem, Variant variant, std::uint64_t iterations,
                        std::uint64_t staleness, double sigma2) {
  PlanRequest req;
  req.variant = variant;
  req.lipschitz = problem.lipschitz();
  const Vector x0 = problem.initial_point();
  req.f0_minus_fstar = problem.eval_mean(x0) - problem.optimal_value();
  req.iterations = iterations;
  req.staleness = staleness;
  req.sigma2 = sigma2;
  return req;
}

StepPlan make_plan(const PlanRequest& request) {
  const LipschitzInfo& lip = request.lipschitz;
  const std::size_t n = lip.dim();
  if (n == 0) throw ValidationError("plan: Lipschitz information is empty");
  if (request.iterations == 0) throw ValidationError("plan: iterations must be >= 1");
  if (!(request.sigma2 >= 0.0)) throw ValidationError("plan: sigma2 must be >= 0");

  StepPlan plan;
  plan.variant = request.variant;
  RunConfig& cfg = plan.config;
  cfg.dim = n;
  cfg.iterations = request.iterations;
  cfg.staleness = request.staleness;
  cfg.sigma2 = request.sigma2;
  cfg.f0_minus_fstar = request.f0_minus_fstar;

  const std::string name(to_string(request.variant));
  auto reject_mu = [&] {
    if (request.mu) throw ValidationError("plan: mu is meaningless for first-order variant " + name);
  };
  auto require_block = [&](std::size_t forced) {
    if (request.block && *request.block != forced) {
      throw ValidationError("plan: variant " + name + " fixes the block size to " +
                            std::to_string(forced));
    }
    cfg.block = forced;
  };

  switch (request.variant) {
    case Variant::ascd:
      reject_mu();
      require_block(1);
      if (request.sigma2 != 0.0) plan.warnings.push_back("ascd uses exact coordinate gradients; sigma2 forced to 0");
      cfg.sigma2 = 0.0;
      break;
    case Variant::asgd_consistent:
      reject_mu();
      require_block(n);
      break;
    case Variant::asgd_inconsistent:
      reject_mu();
      require_block(1);
      break;
    case Variant::aszd: {
      require_block(1);
      plan.mu = request.mu ? *request.mu
                           : MuVector::uniform(n, 1.0 / std::sqrt(as_double(request.iterations)));
      break;
    }
    case Variant::generic:
      cfg.block = request.block.value_or(1);
      if (cfg.block == 0 || cfg.block > n) throw ValidationError("plan: block must be in [1, dim]");
      plan.mu = request.mu;
      break;
  }

  if (plan.mu) {
    if (plan.mu->size() != n) throw ValidationError("plan: mu length must equal the dimension");
    cfg.omega = omega(lip, *plan.mu);
    const double bound = zeroth_order_step_bound(n, cfg.iterations, cfg.sigma2);
    for (double m : plan.mu->values()) {
      if (m > bound) {
        std::ostringstream msg;
        msg << "mu = " << m << " exceeds the zeroth-order step bound " << bound
            << "; the convergence rate is not guaranteed";
        plan.warnings.push_back(msg.str());
        break;
      }
    }
  }

  apply_lipschitz(cfg, lip);
  for (const auto& w : lip.warnings()) plan.warnings.push_back("lipschitz: " + w);

  const Constants c = constants(cfg);
  plan.alpha1 = c.alpha1;
  plan.alpha2 = c.alpha2;
  plan.alpha3 = c.alpha3;
  plan.t_max = max_staleness(cfg);

  const double theory_gamma = generic_step_size(cfg);
  if (request.gamma) {
    if (!(*request.gamma > 0.0) || !std::isfinite(*request.gamma)) {
      throw ValidationError("plan: gamma override must be finite and > 0");
    }
    plan.gamma = *request.gamma;
    plan.gamma_overridden = true;
    plan.warnings.push_back("gamma overridden; rate_bound refers to the computed step size");
  } else {
    plan.gamma = theory_gamma;
  }
  plan.theta_ok = step_size_admissible(cfg, plan.gamma);

  if (as_double(cfg.staleness) <= plan.t_max * (1.0 + kRelativeTolerance)) {
    plan.rate_bound = rate_bound(cfg);
  } else {
    plan.rate_bound = std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    msg << "staleness " << cfg.staleness << " exceeds t_max " << plan.t_max
        << "; no rate guarantee";
    plan.warnings.push_back(msg.str());
  }
  return plan;
}

}  // namespace asynczoo

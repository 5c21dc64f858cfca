#include "asynczoo/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "asynczoo/error.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

namespace {

constexpr double kFiniteDifferenceStep = 1e-5;
constexpr double kProbeRadius = 1e-2;
constexpr int kPowerIterations = 12;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

template <class Fn>
Vector central_difference(std::span<const double> x, double h, Fn&& value) {
  Vector work(x.begin(), x.end());
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = work[i];
    work[i] = xi + h;
    const double up = value(work);
    work[i] = xi - h;
    const double down = value(work);
    work[i] = xi;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace

Vector central_difference_gradient(const Problem& problem, std::span<const double> x,
                                   std::size_t xi, double h) {
  return central_difference(x, h, [&](std::span<const double> p) { return problem.eval(p, xi); });
}

Vector central_difference_gradient_mean(const Problem& problem, std::span<const double> x,
                                        double h) {
  return central_difference(x, h, [&](std::span<const double> p) { return problem.eval_mean(p); });
}

double estimate_sigma2(const Problem& problem, std::span<const double> x,
                       std::size_t n_samples, std::uint64_t seed, std::optional<double> mu) {
  if (n_samples < 2) throw ValidationError("estimate_sigma2: n_samples must be >= 2");
  if (x.size() != problem.dim()) throw ValidationError("estimate_sigma2: point has wrong length");
  const bool first_order = problem.has_gradient() && !mu;
  if (!first_order) {
    if (!mu) throw UnsupportedOracle("estimate_sigma2: zeroth-order problem needs a mu");
    if (!(*mu > 0.0)) throw ValidationError("estimate_sigma2: mu must be > 0");
  }

  const Vector mean = first_order ? problem.grad_mean(x)
                                  : central_difference_gradient_mean(problem, x, *mu);
  RngStream rng(seed, 41);
  double total = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const std::size_t xi = rng.below(problem.num_components());
    const Vector g = first_order ? problem.grad(x, xi)
                                 : central_difference_gradient(problem, x, xi, *mu);
    double d2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) d2 += (g[i] - mean[i]) * (g[i] - mean[i]);
    total += d2;
  }
  return total / static_cast<double>(n_samples);
}

LipschitzInfo estimate_lipschitz(const Problem& problem, std::size_t n_probes,
                                 std::uint64_t seed) {
  const std::size_t n = problem.dim();
  const bool first_order = problem.has_gradient();
  auto gradient = [&](std::span<const double> x, std::size_t xi) {
    return first_order ? problem.grad(x, xi)
                       : central_difference_gradient(problem, x, xi, kFiniteDifferenceStep);
  };
  auto partial = [&](std::span<const double> x, std::size_t xi, std::size_t i) {
    if (first_order) return problem.partial(x, xi, i);
    Vector work(x.begin(), x.end());
    const double h = kFiniteDifferenceStep;
    work[i] = x[i] + h;
    const double up = problem.eval(work, xi);
    work[i] = x[i] - h;
    const double down = problem.eval(work, xi);
    return (up - down) / (2.0 * h);
  };

  RngStream rng(seed, 42);
  const Vector origin = problem.initial_point();
  double global = 0.0;
  std::vector<double> coord(n, 0.0);
  Vector x(n), y(n), dir(n);
  for (std::size_t probe = 0; probe < std::max<std::size_t>(1, n_probes); ++probe) {
    for (std::size_t i = 0; i < n; ++i) x[i] = origin[i] + rng.normal();
    const std::size_t xi = rng.below(problem.num_components());

    for (double& d : dir) d = rng.normal();
    const Vector gx = gradient(x, xi);
    for (int it = 0; it < kPowerIterations; ++it) {
      const double len = norm(dir);
      if (len == 0.0) break;
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + kProbeRadius * dir[i] / len;
      const Vector gy = gradient(y, xi);
      for (std::size_t i = 0; i < n; ++i) dir[i] = gy[i] - gx[i];
      global = std::max(global, norm(dir) / kProbeRadius);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double base = partial(x, xi, i);
      y = x;
      y[i] += kProbeRadius;
      coord[i] = std::max(coord[i], std::abs(partial(y, xi, i) - base) / kProbeRadius);
    }
  }

  global *= kLipschitzSafety;
  for (double& c : coord) c *= kLipschitzSafety;
  return LipschitzInfo(global, std::move(coord), Provenance::estimated);
}

}  // namespace asynczoo

#include "asynczoo/zeroth_order.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "asynczoo/error.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

MuVector::MuVector(std::vector<double> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw ValidationError("MuVector must be non-empty");
  for (double m : steps_) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw ValidationError("finite-difference steps must be finite and > 0");
    }
  }
}

MuVector MuVector::uniform(std::size_t dim, double mu) {
  return MuVector(std::vector<double>(dim, mu));
}

void estimate_block_into(const Problem& problem, std::span<double> x, std::size_t xi,
                         std::span<const std::size_t> coords, const MuVector& mu,
                         SparseGradEstimate& out) {
  const std::size_t n = problem.dim();
  if (coords.empty()) throw ValidationError("coordinate block must be non-empty");
  if (mu.size() != n) throw ValidationError("MuVector length must equal the problem dimension");
  const double scale = static_cast<double>(n) / static_cast<double>(coords.size());
  out.indices.assign(coords.begin(), coords.end());
  out.values.resize(coords.size());
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const std::size_t i = coords[k];
    if (i >= n) throw IndexError("coordinate " + std::to_string(i) + " out of range");
    const double saved = x[i];
    const double step = mu[i];
    x[i] = saved + step;
    const double up = problem.eval(x, xi);
    x[i] = saved - step;
    const double down = problem.eval(x, xi);
    x[i] = saved;
    out.values[k] = scale / (2.0 * step) * (up - down);
  }
}

SparseGradEstimate estimate_block(const Problem& problem, std::span<const double> x,
                                  std::size_t xi, std::span<const std::size_t> coords,
                                  const MuVector& mu) {
  std::vector<std::size_t> sorted(coords.begin(), coords.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("coordinate block must not repeat coordinates");
  }
  Vector work(x.begin(), x.end());
  SparseGradEstimate out;
  estimate_block_into(problem, work, xi, sorted, mu, out);
  return out;
}

SparseGradEstimate estimate_coord(const Problem& problem, std::span<const double> x,
                                  std::size_t xi, std::size_t i, double mu_i) {
  if (!(mu_i > 0.0)) throw ValidationError("finite-difference step must be > 0");
  if (i >= problem.dim()) throw IndexError("coordinate out of range");
  std::vector<double> steps(problem.dim(), mu_i);
  const std::size_t coord[] = {i};
  return estimate_block(problem, x, xi, coord, MuVector(std::move(steps)));
}

double smoothed_value(const ScalarField& p, std::span<const double> x, std::size_t i,
                      double mu_i, std::size_t quad_nodes) {
  if (quad_nodes < 3 || quad_nodes % 2 == 0) {
    throw ValidationError("quadrature needs an odd node count >= 3");
  }
  if (i >= x.size()) throw IndexError("coordinate out of range");
  Vector work(x.begin(), x.end());
  const double h = 2.0 / static_cast<double>(quad_nodes - 1);
  double sum = 0.0;
  for (std::size_t k = 0; k < quad_nodes; ++k) {
    const double v = -1.0 + h * static_cast<double>(k);
    work[i] = x[i] + v * mu_i;
    const double weight = (k == 0 || k + 1 == quad_nodes) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += weight * p(work);
  }
  return 0.5 * sum * h / 3.0;
}

double smoothed_value(const Problem& problem, std::span<const double> x, std::size_t xi,
                      std::size_t i, double mu_i, std::size_t quad_nodes) {
  return smoothed_value([&](std::span<const double> p) { return problem.eval(p, xi); }, x, i,
                        mu_i, quad_nodes);
}

double smoothed_grad_coord(const ScalarField& p, std::span<const double> x, std::size_t i,
                           double mu_i) {
  if (!(mu_i > 0.0)) throw ValidationError("finite-difference step must be > 0");
  if (i >= x.size()) throw IndexError("coordinate out of range");
  Vector work(x.begin(), x.end());
  work[i] = x[i] + mu_i;
  const double up = p(work);
  work[i] = x[i] - mu_i;
  const double down = p(work);
  return (up - down) / (2.0 * mu_i);
}

double smoothed_grad_coord(const Problem& problem, std::span<const double> x, std::size_t xi,
                           std::size_t i, double mu_i) {
  return smoothed_grad_coord([&](std::span<const double> p) { return problem.eval(p, xi); }, x,
                             i, mu_i);
}

double omega(const LipschitzInfo& lipschitz, std::span<const double> mu) {
  if (mu.size() != lipschitz.dim()) {
    throw ValidationError("omega: step vector length must equal the dimension");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] < 0.0) throw ValidationError("omega: steps must be >= 0");
    const double term = lipschitz.coordinate(i) * mu[i];
    sum += term * term;
  }
  return sum / static_cast<double>(mu.size());
}

double omega(const LipschitzInfo& lipschitz, const MuVector& mu) {
  return omega(lipschitz, mu.values());
}

void sample_coordinates(RngStream& rng, std::size_t dim, std::size_t block,
                        std::vector<std::size_t>& pool, std::vector<std::size_t>& out) {
  if (block == 0 || block > dim) throw ValidationError("block size must be in [1, dim]");
  out.resize(block);
  if (block == dim) {
    std::iota(out.begin(), out.end(), 0);
    return;
  }
  if (pool.size() != dim) {
    pool.resize(dim);
    std::iota(pool.begin(), pool.end(), 0);
  }
  for (std::size_t j = 0; j < block; ++j) {
    const std::size_t pick = j + static_cast<std::size_t>(rng.below(dim - j));
    std::swap(pool[j], pool[pick]);
    out[j] = pool[j];
  }
  std::sort(out.begin(), out.end());
}

}  // namespace asynczoo

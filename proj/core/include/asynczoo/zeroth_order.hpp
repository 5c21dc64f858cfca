#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "asynczoo/problem.hpp"

namespace asynczoo {

class RngStream;

/// Per-coordinate finite-difference steps, all strictly positive.
class MuVector {
 public:
  explicit MuVector(std::vector<double> steps);
  static MuVector uniform(std::size_t dim, double mu);

  std::size_t size() const noexcept { return steps_.size(); }
  double operator[](std::size_t i) const noexcept { return steps_[i]; }
  std::span<const double> values() const noexcept { return steps_; }

 private:
  std::vector<double> steps_;
};

/// A block gradient estimate with the N/Y scale already applied. Indices are
/// strictly increasing.
struct SparseGradEstimate {
  std::vector<std::size_t> indices;
  std::vector<double> values;

  std::size_t size() const noexcept { return indices.size(); }
  void clear() noexcept {
    indices.clear();
    values.clear();
  }
};

/// Block zeroth-order estimator: for each i in `coords`,
///   value_i = N / (2 Y mu_i) * (F(x + mu_i e_i; xi) - F(x - mu_i e_i; xi)),
/// with Y = |coords|. Exactly 2Y oracle calls. `coords` must be non-empty and
/// distinct; the result is sorted by coordinate.
SparseGradEstimate estimate_block(const Problem& problem, std::span<const double> x,
                                  std::size_t xi, std::span<const std::size_t> coords,
                                  const MuVector& mu);

/// Same as estimate_block but perturbs `x` in place (each coordinate is
/// restored bit-for-bit) and reuses `out`'s storage. `coords` must already be
/// sorted and distinct.
void estimate_block_into(const Problem& problem, std::span<double> x, std::size_t xi,
                         std::span<const std::size_t> coords, const MuVector& mu,
                         SparseGradEstimate& out);

/// Single-coordinate estimator, scale N / (2 mu_i).
SparseGradEstimate estimate_coord(const Problem& problem, std::span<const double> x,
                                  std::size_t xi, std::size_t i, double mu_i);

using ScalarField = std::function<double(std::span<const double>)>;

/// Composite Simpson approximation of p_i(x) = 1/2 int_{-1}^{1} p(x + v mu_i e_i) dv
/// with an odd number (>= 3) of nodes.
double smoothed_value(const ScalarField& p, std::span<const double> x, std::size_t i,
                      double mu_i, std::size_t quad_nodes = 129);
double smoothed_value(const Problem& problem, std::span<const double> x, std::size_t xi,
                      std::size_t i, double mu_i, std::size_t quad_nodes = 129);

/// i-th component of grad_i p_i(x): (p(x + mu_i e_i) - p(x - mu_i e_i)) / (2 mu_i).
double smoothed_grad_coord(const ScalarField& p, std::span<const double> x, std::size_t i,
                           double mu_i);
double smoothed_grad_coord(const Problem& problem, std::span<const double> x, std::size_t xi,
                           std::size_t i, double mu_i);

/// omega = sum_i L_(i)^2 mu_i^2 / N. Zero steps are accepted (first-order limit).
double omega(const LipschitzInfo& lipschitz, std::span<const double> mu);
double omega(const LipschitzInfo& lipschitz, const MuVector& mu);

/// Uniform size-`block` subset of [0, dim) by partial Fisher-Yates over the
/// persistent permutation `pool` (resized to dim on first use). Writes the
/// subset, sorted, to `out`. block == dim consumes no randomness.
void sample_coordinates(RngStream& rng, std::size_t dim, std::size_t block,
                        std::vector<std::size_t>& pool, std::vector<std::size_t>& out);

}  // namespace asynczoo

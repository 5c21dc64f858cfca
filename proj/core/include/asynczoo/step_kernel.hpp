#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asynczoo/problem.hpp"
#include "asynczoo/stepsize.hpp"
#include "asynczoo/zeroth_order.hpp"

namespace asynczoo {

class RngStream;

/// One draw of (xi, S).
struct StepDraw {
  std::size_t xi = 0;
  std::vector<std::size_t> coords;  // sorted
};

/// Draws xi uniformly from the components, then S uniformly among the
/// size-`block` subsets. `pool` is per-caller scratch for the subset sampler.
void sample_step(RngStream& rng, std::size_t dim, std::size_t block, std::size_t n_components,
                 std::vector<std::size_t>& pool, StepDraw& out);

/// Computes G_S(x; xi) for a plan's variant:
///   zeroth order (plan has mu): block central differences, scale N / Y;
///   ascd: N * d_i f(x), the mean objective's partial;
///   everything else: (N / Y) * d_i F(x; xi) for i in S.
class StepKernel {
 public:
  /// Throws UnsupportedOracle when a first-order variant meets a problem
  /// without gradients, ValidationError on a dimension mismatch.
  StepKernel(const Problem& problem, const StepPlan& plan);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t block() const noexcept { return block_; }

  /// Not thread-safe (keeps sampler scratch); use one kernel per worker.
  void sample(RngStream& rng, StepDraw& out);

  /// `x` may be perturbed during the call but is restored bit-for-bit.
  void estimate(std::span<double> x, const StepDraw& draw, SparseGradEstimate& out) const;

 private:
  const Problem& problem_;
  const StepPlan& plan_;
  std::size_t dim_;
  std::size_t block_;
  std::vector<std::size_t> pool_;
};

}  // namespace asynczoo

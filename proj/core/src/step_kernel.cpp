#include "asynczoo/step_kernel.hpp"

#include "asynczoo/error.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

void sample_step(RngStream& rng, std::size_t dim, std::size_t block, std::size_t n_components,
                 std::vector<std::size_t>& pool, StepDraw& out) {
  if (n_components == 0) throw ValidationError("sample_step: no components");
  out.xi = n_components == 1 ? 0 : static_cast<std::size_t>(rng.below(n_components));
  sample_coordinates(rng, dim, block, pool, out.coords);
}

StepKernel::StepKernel(const Problem& problem, const StepPlan& plan)
    : problem_(problem), plan_(plan), dim_(problem.dim()), block_(plan.config.block) {
  if (plan.config.dim != dim_) {
    throw ValidationError("step plan dimension " + std::to_string(plan.config.dim) +
                          " does not match the problem dimension " + std::to_string(dim_));
  }
  if (!plan.zeroth_order() && !problem.has_gradient()) {
    throw UnsupportedOracle("variant " + std::string(to_string(plan.variant)) +
                            " needs gradients, but problem '" + std::string(problem.kind()) +
                            "' only has a zeroth-order oracle");
  }
}

void StepKernel::sample(RngStream& rng, StepDraw& out) {
  sample_step(rng, dim_, block_, problem_.num_components(), pool_, out);
}

void StepKernel::estimate(std::span<double> x, const StepDraw& draw,
                          SparseGradEstimate& out) const {
  if (plan_.mu) {
    estimate_block_into(problem_, x, draw.xi, draw.coords, *plan_.mu, out);
    return;
  }
  const double scale = static_cast<double>(dim_) / static_cast<double>(draw.coords.size());
  out.indices.assign(draw.coords.begin(), draw.coords.end());
  out.values.resize(draw.coords.size());
  if (plan_.variant == Variant::ascd) {
    for (std::size_t j = 0; j < draw.coords.size(); ++j) {
      out.values[j] = scale * problem_.partial_mean(x, draw.coords[j]);
    }
  } else if (draw.coords.size() == dim_) {
    const Vector g = problem_.grad(x, draw.xi);
    for (std::size_t j = 0; j < dim_; ++j) out.values[j] = scale * g[j];
  } else {
    for (std::size_t j = 0; j < draw.coords.size(); ++j) {
      out.values[j] = scale * problem_.partial(x, draw.xi, draw.coords[j]);
    }
  }
}

}  // namespace asynczoo

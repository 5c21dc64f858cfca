#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asynczoo/problem.hpp"

namespace asynczoo {

// ---------------------------------------------------------------------------
// Quadratic: F(x; xi) = 1/2 (x - c_xi)^T A (x - c_xi)
// ---------------------------------------------------------------------------

class QuadraticProblem final : public Problem {
 public:
  /// `hessian` is N x N row-major, symmetric positive semidefinite; one
  /// center per component. Lipschitz constants are analytic.
  QuadraticProblem(std::vector<double> hessian, std::vector<Vector> centers);

  std::string_view kind() const noexcept override { return "quadratic"; }
  bool has_gradient() const noexcept override { return true; }
  double optimal_value() const noexcept override { return optimal_value_; }

  std::span<const double> hessian() const noexcept { return hessian_; }
  const std::vector<Vector>& centers() const noexcept { return centers_; }
  /// The minimizer of the mean objective (the mean center).
  std::span<const double> minimizer() const noexcept { return mean_center_; }
  double hessian_entry(std::size_t r, std::size_t c) const { return hessian_[r * dim() + c]; }

 protected:
  double do_eval(std::span<const double> x, std::size_t xi) const override;
  double do_eval_mean(std::span<const double> x) const override;
  void do_grad(std::span<const double> x, std::size_t xi,
               std::span<double> out) const override;
  void do_grad_mean(std::span<const double> x, std::span<double> out) const override;
  double do_partial(std::span<const double> x, std::size_t xi,
                    std::size_t i) const override;
  double do_partial_mean(std::span<const double> x, std::size_t i) const override;

 private:
  double quad_form(std::span<const double> x, std::span<const double> center) const;
  double row_dot_diff(std::size_t i, std::span<const double> x,
                      std::span<const double> center) const;

  std::vector<double> hessian_;
  std::vector<Vector> centers_;
  Vector mean_center_;
  double optimal_value_ = 0.0;
};

struct QuadraticOptions {
  /// Standard deviation of the component centers around their common mean;
  /// controls the gradient variance.
  double center_spread = 1.0;
  /// Random orthogonal eigenbasis. When false the Hessian is diagonal with
  /// the log-spaced eigenvalues in increasing order.
  bool rotate = true;
};

/// Seeded strongly convex quadratic with eigenvalues log-spaced in
/// [1, condition]. x0 = 0; centers are N(m, spread^2 I) with m ~ N(0, I).
std::shared_ptr<const QuadraticProblem> make_quadratic(std::size_t dim, std::uint64_t seed,
                                                       double condition,
                                                       std::size_t num_components,
                                                       QuadraticOptions options = {});

// ---------------------------------------------------------------------------
// Model blending: f(x) = ||A x - r||^2 / n
// ---------------------------------------------------------------------------

/// Prediction matrix (rows = samples, columns = models, row-major) and the
/// true ratings. `truth` holds the generating coefficients for synthetic data.
struct BlendData {
  std::size_t rows = 0;
  std::size_t models = 0;
  std::vector<double> predictions;
  std::vector<double> ratings;
  std::optional<Vector> truth;

  double prediction(std::size_t r, std::size_t m) const { return predictions[r * models + m]; }
  void validate() const;
};

/// Synthetic ensemble: every model predicts a shared latent rating plus its
/// own noise; ratings are predictions * truth + N(0, noise_std^2).
BlendData synthesize_blend(std::size_t n_rows, std::size_t n_models, std::uint64_t seed,
                           double noise_std);

/// Headerless CSV: one row per sample, model columns then the rating.
void write_blend_csv(const BlendData& data, std::ostream& out);
BlendData read_blend_csv(std::istream& in);

/// Random split into two halves (the first gets the extra row on odd n).
std::pair<BlendData, BlendData> split_blend(const BlendData& data, std::uint64_t seed);

class BlendProblem final : public Problem {
 public:
  /// Objective on `train`; `holdout` (possibly empty) is only used for
  /// held-out RMSE reporting.
  BlendProblem(BlendData train, BlendData holdout = {});

  std::string_view kind() const noexcept override { return "blend"; }
  bool has_gradient() const noexcept override { return true; }

  const BlendData& train() const noexcept { return train_; }
  const BlendData& holdout() const noexcept { return holdout_; }
  const std::optional<Vector>& truth() const noexcept { return train_.truth; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::vector<double> predict(const BlendData& data, std::span<const double> x) const;
  double train_rmse(std::span<const double> x) const;
  /// Throws ValidationError when there is no held-out split.
  double holdout_rmse(std::span<const double> x) const;

 protected:
  double do_eval(std::span<const double> x, std::size_t xi) const override;
  void do_grad(std::span<const double> x, std::size_t xi,
               std::span<double> out) const override;
  double do_partial(std::span<const double> x, std::size_t xi,
                    std::size_t i) const override;

 private:
  BlendData train_;
  BlendData holdout_;
  // Normal-equation form: f(x) = (x^T G x - 2 b^T x + c) / n.
  std::vector<double> gram_;
  Vector moment_;
  double ratings_sq_ = 0.0;
  std::vector<std::string> warnings_;
};

/// Synthesizes n_rows samples and keeps a random half as the held-out split.
std::shared_ptr<const BlendProblem> make_blend(std::size_t n_rows, std::size_t n_models,
                                               std::uint64_t seed, double noise_std);

// ---------------------------------------------------------------------------
// Noisy neural-network black box (zeroth-order only)
// ---------------------------------------------------------------------------

class NeuralBlackbox final : public Problem {
 public:
  /// layer_sizes = {inputs, hidden..., outputs}; tanh hidden units, linear
  /// output, every non-input layer has biases. Data come from a seeded
  /// teacher network plus Gaussian output noise drawn once.
  NeuralBlackbox(std::vector<std::size_t> layer_sizes, std::size_t n_samples,
                 std::uint64_t seed, double noise_std);

  std::string_view kind() const noexcept override { return "blackbox"; }
  Vector initial_point() const override { return initial_; }

  std::span<const std::size_t> layer_sizes() const noexcept { return layers_; }
  std::span<const double> teacher_weights() const noexcept { return teacher_; }
  std::span<const double> inputs(std::size_t sample) const;
  std::span<const double> targets(std::size_t sample) const;

  static std::size_t weight_count(std::span<const std::size_t> layer_sizes);

 protected:
  double do_eval(std::span<const double> x, std::size_t xi) const override;

 private:
  void forward(std::span<const double> weights, std::span<const double> input,
               std::span<double> output) const;

  std::vector<std::size_t> layers_;
  std::size_t max_width_ = 0;
  Vector teacher_;
  Vector initial_;
  std::vector<double> inputs_;
  std::vector<double> targets_;
};

std::shared_ptr<const NeuralBlackbox> make_noisy_blackbox(std::vector<std::size_t> layer_sizes,
                                                          std::size_t n_samples,
                                                          std::uint64_t seed, double noise_std);

// ---------------------------------------------------------------------------
// Smooth test functions with analytic per-coordinate curvature bounds
// ---------------------------------------------------------------------------

/// p(x) = 1/2 x^T A x + b^T x + sum_i c_i cos(w_i x_i + phi_i), a single
/// component. L_(i) = A_ii + |c_i| w_i^2 bounds the i-th second derivative.
/// With `convex` the spectrum of A dominates the cosine curvature.
class SmoothTestProblem final : public Problem {
 public:
  SmoothTestProblem(std::vector<double> hessian, Vector linear, Vector amplitude,
                    Vector frequency, Vector phase);

  std::string_view kind() const noexcept override { return "smooth-test"; }
  bool has_gradient() const noexcept override { return true; }

 protected:
  double do_eval(std::span<const double> x, std::size_t xi) const override;
  void do_grad(std::span<const double> x, std::size_t xi,
               std::span<double> out) const override;
  double do_partial(std::span<const double> x, std::size_t xi,
                    std::size_t i) const override;

 private:
  std::vector<double> hessian_;
  Vector linear_, amplitude_, frequency_, phase_;
};

std::shared_ptr<const SmoothTestProblem> make_smooth_test_function(std::size_t dim,
                                                                   std::uint64_t seed,
                                                                   bool convex = false);

}  // namespace asynczoo

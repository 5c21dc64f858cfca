#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "asynczoo/error.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

SmoothTestProblem::SmoothTestProblem(std::vector<double> hessian, Vector linear, Vector amplitude,
                                     Vector frequency, Vector phase)
    : Problem(linear.size(), 1),
      hessian_(std::move(hessian)),
      linear_(std::move(linear)),
      amplitude_(std::move(amplitude)),
      frequency_(std::move(frequency)),
      phase_(std::move(phase)) {
  const std::size_t n = dim();
  if (hessian_.size() != n * n || amplitude_.size() != n || frequency_.size() != n ||
      phase_.size() != n) {
    throw ValidationError("smooth test function: inconsistent parameter sizes");
  }
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMatrix> a(hessian_.data(), static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  double wave = 0.0;
  std::vector<double> coord(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double curvature = std::abs(amplitude_[i]) * frequency_[i] * frequency_[i];
    wave = std::max(wave, curvature);
    coord[i] = hessian_[i * n + i] + curvature;
  }
  // ||A + D|| <= ||A|| + max |D_ii| for the diagonal cosine Hessian D.
  const double top = std::abs(solver.eigenvalues().maxCoeff());
  set_lipschitz(LipschitzInfo(top + wave, std::move(coord), Provenance::analytic));
}

double SmoothTestProblem::do_eval(std::span<const double> x, std::size_t) const {
  const std::size_t n = dim();
  double value = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < n; ++c) row += hessian_[r * n + c] * x[c];
    value += 0.5 * x[r] * row + linear_[r] * x[r] +
             amplitude_[r] * std::cos(frequency_[r] * x[r] + phase_[r]);
  }
  return value;
}

void SmoothTestProblem::do_grad(std::span<const double> x, std::size_t xi,
                                std::span<double> out) const {
  for (std::size_t i = 0; i < dim(); ++i) out[i] = do_partial(x, xi, i);
}

double SmoothTestProblem::do_partial(std::span<const double> x, std::size_t,
                                     std::size_t i) const {
  const std::size_t n = dim();
  double row = 0.0;
  for (std::size_t c = 0; c < n; ++c) row += hessian_[i * n + c] * x[c];
  return row + linear_[i] -
         amplitude_[i] * frequency_[i] * std::sin(frequency_[i] * x[i] + phase_[i]);
}

std::shared_ptr<const SmoothTestProblem> make_smooth_test_function(std::size_t dim,
                                                                   std::uint64_t seed,
                                                                   bool convex) {
  if (dim == 0) throw ValidationError("make_smooth_test_function: dim must be >= 1");
  RngStream rng(seed, 31);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) b(r, c) = rng.normal();
  }
  Eigen::MatrixXd a = b * b.transpose() / static_cast<double>(dim);

  Vector linear(dim), amplitude(dim), frequency(dim), phase(dim);
  double wave = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    linear[i] = rng.normal();
    amplitude[i] = rng.uniform(-1.0, 1.0);
    frequency[i] = rng.uniform(0.5, 2.0);
    phase[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    wave = std::max(wave, std::abs(amplitude[i]) * frequency[i] * frequency[i]);
  }
  if (convex) a += (wave + 0.1) * Eigen::MatrixXd::Identity(n, n);
  a = 0.5 * (a + a.transpose()).eval();

  std::vector<double> hessian(dim * dim);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) hessian[static_cast<std::size_t>(r * n + c)] = a(r, c);
  }
  return std::make_shared<const SmoothTestProblem>(std::move(hessian), std::move(linear),
                                                   std::move(amplitude), std::move(frequency),
                                                   std::move(phase));
}

}  // namespace asynczoo

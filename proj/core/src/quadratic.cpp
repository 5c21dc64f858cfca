#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "asynczoo/error.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::VectorXd symmetric_spectrum(std::span<const double> a, std::size_t n) {
  Eigen::Map<const RowMatrix> m(a.data(), static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

std::size_t square_side(std::size_t size) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(size))));
  if (n * n != size || n == 0) throw ValidationError("hessian must be a non-empty square matrix");
  return n;
}

}  // namespace

QuadraticProblem::QuadraticProblem(std::vector<double> hessian, std::vector<Vector> centers)
    : Problem(square_side(hessian.size()), centers.size()),
      hessian_(std::move(hessian)),
      centers_(std::move(centers)) {
  const std::size_t n = dim();
  double scale = 0.0;
  for (double v : hessian_) {
    if (!std::isfinite(v)) throw ValidationError("hessian entries must be finite");
    scale = std::max(scale, std::abs(v));
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) {
      if (std::abs(hessian_[r * n + c] - hessian_[c * n + r]) > 1e-12 * std::max(1.0, scale)) {
        throw ValidationError("hessian must be symmetric");
      }
    }
  }
  for (const auto& c : centers_) {
    if (c.size() != n) throw ValidationError("every center must have the problem dimension");
  }

  const Eigen::VectorXd spectrum = symmetric_spectrum(hessian_, n);
  const double top = spectrum.maxCoeff();
  if (spectrum.minCoeff() < -1e-10 * std::max(1.0, top)) {
    throw ValidationError("hessian must be positive semidefinite");
  }

  mean_center_.assign(n, 0.0);
  for (const auto& c : centers_) {
    for (std::size_t i = 0; i < n; ++i) mean_center_[i] += c[i];
  }
  for (double& v : mean_center_) v /= static_cast<double>(centers_.size());

  double spread = 0.0;
  for (const auto& c : centers_) spread += quad_form(c, mean_center_);
  optimal_value_ = spread / static_cast<double>(centers_.size());

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = std::max(0.0, hessian_[i * n + i]);
  set_lipschitz(LipschitzInfo(std::max(0.0, top), std::move(diag), Provenance::analytic));
}

double QuadraticProblem::row_dot_diff(std::size_t i, std::span<const double> x,
                                      std::span<const double> center) const {
  const std::size_t n = dim();
  const double* row = hessian_.data() + i * n;
  double acc = 0.0;
  for (std::size_t c = 0; c < n; ++c) acc += row[c] * (x[c] - center[c]);
  return acc;
}

double QuadraticProblem::quad_form(std::span<const double> x,
                                   std::span<const double> center) const {
  const std::size_t n = dim();
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) acc += (x[r] - center[r]) * row_dot_diff(r, x, center);
  return 0.5 * acc;
}

double QuadraticProblem::do_eval(std::span<const double> x, std::size_t xi) const {
  return quad_form(x, centers_[xi]);
}

double QuadraticProblem::do_eval_mean(std::span<const double> x) const {
  return quad_form(x, mean_center_) + optimal_value_;
}

void QuadraticProblem::do_grad(std::span<const double> x, std::size_t xi,
                               std::span<double> out) const {
  for (std::size_t i = 0; i < dim(); ++i) out[i] = row_dot_diff(i, x, centers_[xi]);
}

void QuadraticProblem::do_grad_mean(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < dim(); ++i) out[i] = row_dot_diff(i, x, mean_center_);
}

double QuadraticProblem::do_partial(std::span<const double> x, std::size_t xi,
                                    std::size_t i) const {
  return row_dot_diff(i, x, centers_[xi]);
}

double QuadraticProblem::do_partial_mean(std::span<const double> x, std::size_t i) const {
  return row_dot_diff(i, x, mean_center_);
}

std::shared_ptr<const QuadraticProblem> make_quadratic(std::size_t dim, std::uint64_t seed,
                                                       double condition,
                                                       std::size_t num_components,
                                                       QuadraticOptions options) {
  if (dim == 0) throw ValidationError("make_quadratic: dim must be >= 1");
  if (!(condition >= 1.0) || !std::isfinite(condition)) {
    throw ValidationError("make_quadratic: condition must be finite and >= 1");
  }
  if (num_components == 0) throw ValidationError("make_quadratic: need >= 1 component");
  if (!(options.center_spread >= 0.0)) {
    throw ValidationError("make_quadratic: center_spread must be >= 0");
  }

  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::VectorXd eigenvalues(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = dim == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(n - 1);
    eigenvalues[j] = std::pow(condition, t);
  }

  Eigen::MatrixXd a;
  if (options.rotate && dim > 1) {
    RngStream basis_rng(seed, 1);
    Eigen::MatrixXd gaussian(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) gaussian(r, c) = basis_rng.normal();
    }
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian).householderQ();
    a = q * eigenvalues.asDiagonal() * q.transpose();
    a = 0.5 * (a + a.transpose()).eval();
  } else {
    a = eigenvalues.asDiagonal();
  }

  std::vector<double> hessian(dim * dim);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) hessian[static_cast<std::size_t>(r * n + c)] = a(r, c);
  }

  RngStream center_rng(seed, 2);
  Vector common(dim);
  for (double& v : common) v = center_rng.normal();
  std::vector<Vector> centers(num_components, Vector(dim));
  for (auto& c : centers) {
    for (std::size_t i = 0; i < dim; ++i) c[i] = common[i] + options.center_spread * center_rng.normal();
  }
  return std::make_shared<const QuadraticProblem>(std::move(hessian), std::move(centers));
}

}  // namespace asynczoo

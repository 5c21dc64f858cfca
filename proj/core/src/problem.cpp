#include <algorithm>
#include <string>

#include "asynczoo/error.hpp"
#include "asynczoo/problem.hpp"

namespace asynczoo {

Problem::Problem(std::size_t dim, std::size_t num_components)
    : dim_(dim), num_components_(num_components) {
  if (dim == 0) throw ValidationError("problem dimension must be >= 1");
  if (num_components == 0) throw ValidationError("problem needs at least one component");
}

void Problem::check_point(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw ValidationError("point has length " + std::to_string(x.size()) +
                          ", problem dimension is " + std::to_string(dim_));
  }
}

void Problem::check_component(std::size_t xi) const {
  if (xi >= num_components_) {
    throw IndexError("component index " + std::to_string(xi) + " out of range [0, " +
                     std::to_string(num_components_) + ")");
  }
}

void Problem::check_coordinate(std::size_t i) const {
  if (i >= dim_) {
    throw IndexError("coordinate " + std::to_string(i) + " out of range [0, " +
                     std::to_string(dim_) + ")");
  }
}

double Problem::eval(std::span<const double> x, std::size_t xi) const {
  check_point(x);
  check_component(xi);
  return do_eval(x, xi);
}

double Problem::eval_mean(std::span<const double> x) const {
  check_point(x);
  return do_eval_mean(x);
}

Vector Problem::grad(std::span<const double> x, std::size_t xi) const {
  check_point(x);
  check_component(xi);
  Vector out(dim_, 0.0);
  do_grad(x, xi, out);
  return out;
}

Vector Problem::grad_mean(std::span<const double> x) const {
  check_point(x);
  Vector out(dim_, 0.0);
  do_grad_mean(x, out);
  return out;
}

double Problem::partial(std::span<const double> x, std::size_t xi, std::size_t i) const {
  check_point(x);
  check_component(xi);
  check_coordinate(i);
  return do_partial(x, xi, i);
}

double Problem::partial_mean(std::span<const double> x, std::size_t i) const {
  check_point(x);
  check_coordinate(i);
  return do_partial_mean(x, i);
}

double Problem::do_eval_mean(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t xi = 0; xi < num_components_; ++xi) sum += do_eval(x, xi);
  return sum / static_cast<double>(num_components_);
}

void Problem::do_grad(std::span<const double>, std::size_t, std::span<double>) const {
  throw UnsupportedOracle(std::string(kind()) + " exposes only a zeroth-order oracle");
}

void Problem::do_grad_mean(std::span<const double> x, std::span<double> out) const {
  Vector g(dim_);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t xi = 0; xi < num_components_; ++xi) {
    do_grad(x, xi, g);
    for (std::size_t i = 0; i < dim_; ++i) out[i] += g[i];
  }
  const double inv = 1.0 / static_cast<double>(num_components_);
  for (double& v : out) v *= inv;
}

double Problem::do_partial(std::span<const double> x, std::size_t xi, std::size_t i) const {
  Vector g(dim_);
  do_grad(x, xi, g);
  return g[i];
}

double Problem::do_partial_mean(std::span<const double> x, std::size_t i) const {
  Vector g(dim_);
  do_grad_mean(x, g);
  return g[i];
}

}  // namespace asynczoo

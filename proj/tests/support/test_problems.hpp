#pragma once

// Small hand-built problems for tests: closed-form objectives whose values
// and gradients can be worked out on paper.

#include <algorithm>
#include <atomic>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "asynczoo/problem.hpp"

namespace asynczoo::test_support {

using EvalFn = std::function<double(std::span<const double>, std::size_t)>;
using GradFn = std::function<void(std::span<const double>, std::size_t, std::span<double>)>;

// Problem defined by lambdas. Without a gradient it is zeroth-order only.
class LambdaProblem final : public Problem {
 public:
  LambdaProblem(std::size_t dim, std::size_t components, EvalFn eval, GradFn grad,
                LipschitzInfo lip, Vector x0 = {}, double fstar = 0.0)
      : Problem(dim, components),
        eval_(std::move(eval)),
        grad_(std::move(grad)),
        x0_(x0.empty() ? Vector(dim, 0.0) : std::move(x0)),
        fstar_(fstar) {
    set_lipschitz(std::move(lip));
  }

  std::string_view kind() const noexcept override { return "lambda"; }
  bool has_gradient() const noexcept override { return static_cast<bool>(grad_); }
  Vector initial_point() const override { return x0_; }
  double optimal_value() const noexcept override { return fstar_; }

 protected:
  double do_eval(std::span<const double> x, std::size_t xi) const override {
    return eval_(x, xi);
  }
  void do_grad(std::span<const double> x, std::size_t xi, std::span<double> out) const override {
    grad_(x, xi, out);
  }

 private:
  EvalFn eval_;
  GradFn grad_;
  Vector x0_;
  double fstar_;
};

// f(x) = 1/2 sum_i a_i x_i^2, single component.
inline LambdaProblem diagonal_quadratic(std::vector<double> a, Vector x0 = {}) {
  const std::size_t n = a.size();
  double top = 0.0;
  for (double v : a) top = std::max(top, v);
  auto eval = [a](std::span<const double> x, std::size_t) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += 0.5 * a[i] * x[i] * x[i];
    return s;
  };
  auto grad = [a](std::span<const double> x, std::size_t, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a[i] * x[i];
  };
  return LambdaProblem(n, 1, eval, grad, LipschitzInfo(top, a, Provenance::analytic),
                       std::move(x0));
}

// Wraps a problem and counts eval calls.
class CountingProblem final : public Problem {
 public:
  explicit CountingProblem(const Problem& inner)
      : Problem(inner.dim(), inner.num_components()), inner_(inner) {
    set_lipschitz(inner.lipschitz());
  }
  std::string_view kind() const noexcept override { return "counting"; }
  std::size_t calls() const noexcept { return calls_.load(); }

 protected:
  double do_eval(std::span<const double> x, std::size_t xi) const override {
    calls_.fetch_add(1);
    return inner_.eval(x, xi);
  }

 private:
  const Problem& inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

}  // namespace asynczoo::test_support

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asynczoo {

using Vector = std::vector<double>;

enum class Provenance { analytic, estimated };

std::string_view to_string(Provenance p) noexcept;

/// Gradient Lipschitz constants of a problem: the global constant, the
/// per-coordinate constants, their maximum, and the block constant for
/// blocks of up to s coordinates.
///
/// The chain max_coordinate() <= block(s) <= global() always holds. Inputs
/// that violate it are clamped into the chain and a warning is recorded.
class LipschitzInfo {
 public:
  using BlockFn = std::function<double(std::size_t)>;

  LipschitzInfo() = default;
  /// `block_fn`, when given, is evaluated lazily and clamped; the default is
  /// min(global, s * max_coordinate).
  LipschitzInfo(double global, std::vector<double> per_coordinate,
                Provenance provenance, BlockFn block_fn = {});

  double global() const noexcept { return global_; }
  std::span<const double> per_coordinate() const noexcept { return per_coordinate_; }
  double coordinate(std::size_t i) const { return per_coordinate_.at(i); }
  double max_coordinate() const noexcept { return max_coordinate_; }
  std::size_t dim() const noexcept { return per_coordinate_.size(); }
  Provenance provenance() const noexcept { return provenance_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Block constant for s in [1, dim]; s = 0 is read as 1 and s > dim as dim.
  /// Nondecreasing in s.
  double block(std::size_t s) const;

 private:
  double clamp_to_chain(double v) const noexcept;

  double global_ = 0.0;
  std::vector<double> per_coordinate_;
  double max_coordinate_ = 0.0;
  Provenance provenance_ = Provenance::analytic;
  BlockFn block_fn_;
  std::vector<std::string> warnings_;
};

/// A finite-sum stochastic objective f(x) = (1/n) sum_xi F(x; xi).
///
/// Values are immutable after construction and every oracle is safe to call
/// concurrently. The public oracles validate their arguments (length of x,
/// range of xi and i) and forward to the protected do_* hooks.
class Problem {
 public:
  virtual ~Problem() = default;
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t num_components() const noexcept { return num_components_; }

  double eval(std::span<const double> x, std::size_t xi) const;
  double eval_mean(std::span<const double> x) const;

  virtual bool has_gradient() const noexcept { return false; }
  /// Throws UnsupportedOracle on zeroth-order-only problems.
  Vector grad(std::span<const double> x, std::size_t xi) const;
  Vector grad_mean(std::span<const double> x) const;
  double partial(std::span<const double> x, std::size_t xi, std::size_t i) const;
  double partial_mean(std::span<const double> x, std::size_t i) const;

  virtual std::string_view kind() const noexcept = 0;
  const LipschitzInfo& lipschitz() const noexcept { return lipschitz_; }
  /// f*, the optimal value of the mean objective (0 unless known).
  virtual double optimal_value() const noexcept { return 0.0; }
  /// Default starting point x0.
  virtual Vector initial_point() const { return Vector(dim_, 0.0); }

 protected:
  Problem(std::size_t dim, std::size_t num_components);

  void set_lipschitz(LipschitzInfo info) { lipschitz_ = std::move(info); }

  virtual double do_eval(std::span<const double> x, std::size_t xi) const = 0;
  virtual double do_eval_mean(std::span<const double> x) const;
  virtual void do_grad(std::span<const double> x, std::size_t xi,
                       std::span<double> out) const;
  virtual void do_grad_mean(std::span<const double> x, std::span<double> out) const;
  virtual double do_partial(std::span<const double> x, std::size_t xi,
                            std::size_t i) const;
  virtual double do_partial_mean(std::span<const double> x, std::size_t i) const;

  void check_point(std::span<const double> x) const;
  void check_component(std::size_t xi) const;
  void check_coordinate(std::size_t i) const;

 private:
  std::size_t dim_;
  std::size_t num_components_;
  LipschitzInfo lipschitz_;
};

using ProblemPtr = std::shared_ptr<const Problem>;

}  // namespace asynczoo

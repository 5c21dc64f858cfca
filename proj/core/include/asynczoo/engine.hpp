#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "asynczoo/delay_model.hpp"
#include "asynczoo/param_store.hpp"
#include "asynczoo/problem.hpp"
#include "asynczoo/step_kernel.hpp"
#include "asynczoo/stepsize.hpp"

namespace asynczoo {

struct Snapshot {
  std::uint64_t k = 0;
  double time_s = 0.0;  // since the start of the run; 0 in the simulator
  Vector x;
};

struct TracePoint {
  std::uint64_t k = 0;
  double value = 0.0;
};

struct RunReport {
  Variant variant = Variant::generic;
  std::size_t threads = 0;  // 0 for the simulator
  std::uint64_t k_done = 0;
  double wall_time_s = 0.0;
  std::vector<Snapshot> snapshots;  // strictly increasing k; first is k = 0
  std::vector<TracePoint> grad_norm_sq;
  std::vector<TracePoint> objective;
  std::uint64_t observed_staleness_max = 0;
  bool staleness_exceeded = false;  // observed_staleness_max > plan staleness
  StepPlan step_plan;
  Vector final_x;
};

struct RunOptions {
  std::uint64_t iterations = 1;      // K
  std::uint64_t seed = 0;
  /// Snapshot every `snapshot_stride` updates (plus k = 0 and the final
  /// iterate). 0 keeps only those two.
  std::uint64_t snapshot_stride = 0;
  /// Run even when the plan's step size fails the admissibility check.
  bool force = false;
  /// Fill grad_norm_sq and objective from the snapshots after the run.
  bool compute_traces = true;
};

/// What the simulator did at step k; passed to the optional observer.
struct StepEvent {
  std::uint64_t k = 0;
  std::span<const double> x;       // x_k before the update
  std::span<const double> x_read;  // the (possibly stale) read x_hat_k
  std::span<const std::uint64_t> missed;  // J(k)
  const StepDraw* draw = nullptr;
  const SparseGradEstimate* estimate = nullptr;
};

using StepObserver = std::function<void(const StepEvent&)>;

/// Deterministic single-threaded execution with an explicit delay model:
///   x_hat_k = x_k - sum_{j in J(k)} (x_{j+1} - x_j),  x_{k+1} = x_k - gamma G_S(x_hat_k; xi_k).
/// The last T update vectors are kept as sparse deltas. Throws
/// PrerequisiteViolated when the plan is not admissible and !force, and
/// ValidationError when the delay model's staleness exceeds the plan's.
RunReport run_simulated(const Problem& problem, const StepPlan& plan, const DelayModel& delay,
                        const RunOptions& options, const StepObserver& observer = {});

/// Hard cap on worker threads: ASYNCZOO_THREAD_CAP if set, otherwise 256.
std::size_t thread_cap();

/// Real shared-memory execution with `threads` workers. asgd_consistent uses
/// consistent snapshot reads, every other variant lock-free coordinate reads.
/// Worker w samples from stream (seed, w). Staleness is measured as the
/// update's index minus the counter seen when its read began.
RunReport run_async(const Problem& problem, const StepPlan& plan, std::size_t threads,
                    const RunOptions& options);

/// Store mode used by run_async for a variant.
ReadMode read_mode_for(Variant v) noexcept;

/// ||grad f(x)||^2, by central differences (step 1e-5) for zeroth-order problems.
double grad_norm_sq(const Problem& problem, std::span<const double> x);

/// Recomputes report.grad_norm_sq and report.objective from the snapshots.
void compute_traces(const Problem& problem, RunReport& report);

}  // namespace asynczoo

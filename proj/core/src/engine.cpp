#include "asynczoo/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "asynczoo/error.hpp"
#include "asynczoo/estimation.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

namespace {

// Stream ids under the master seed. Worker w of run_async uses stream w, so
// worker 0 and the simulator draw the same (xi, S) sequence.
constexpr std::uint64_t kDelayStream = 0xD1'1A'40'00ULL;
constexpr std::size_t kDefaultThreadCap = 256;
constexpr double kTraceDifferenceStep = 1e-5;

struct SparseDelta {
  std::vector<std::size_t> indices;
  std::vector<double> values;
};

void check_admissible(const StepPlan& plan, bool force) {
  if (!plan.theta_ok && !force) {
    throw PrerequisiteViolated(
        "step size " + std::to_string(plan.gamma) +
        " fails the admissibility condition for the configured staleness; pass force to run anyway");
  }
}

void check_iterations(const RunOptions& options) {
  if (options.iterations == 0) throw ValidationError("iterations must be >= 1");
}

RunReport start_report(const StepPlan& plan, std::size_t threads) {
  RunReport report;
  report.variant = plan.variant;
  report.threads = threads;
  report.step_plan = plan;
  return report;
}

void finish_report(const Problem& problem, const RunOptions& options, RunReport& report) {
  report.staleness_exceeded = report.observed_staleness_max > report.step_plan.config.staleness;
  if (report.snapshots.back().k != report.k_done) {
    report.snapshots.push_back({report.k_done, report.wall_time_s, report.final_x});
  }
  if (options.compute_traces) compute_traces(problem, report);
}

}  // namespace

ReadMode read_mode_for(Variant v) noexcept {
  return v == Variant::asgd_consistent ? ReadMode::consistent : ReadMode::inconsistent;
}

std::size_t thread_cap() {
  const char* env = std::getenv("ASYNCZOO_THREAD_CAP");
  if (env == nullptr || *env == '\0') return kDefaultThreadCap;
  char* end = nullptr;
  const unsigned long long cap = std::strtoull(env, &end, 10);
  if (*end != '\0' || cap == 0) {
    throw ValidationError(std::string("ASYNCZOO_THREAD_CAP must be a positive integer, got '") +
                          env + "'");
  }
  return static_cast<std::size_t>(cap);
}

RunReport run_simulated(const Problem& problem, const StepPlan& plan, const DelayModel& delay,
                        const RunOptions& options, const StepObserver& observer) {
  check_admissible(plan, options.force);
  check_iterations(options);
  const std::uint64_t t = delay.staleness();
  if (t > plan.config.staleness) {
    throw ValidationError("delay model staleness " + std::to_string(t) +
                          " exceeds the plan's staleness " +
                          std::to_string(plan.config.staleness));
  }

  StepKernel kernel(problem, plan);
  RngStream sampler(options.seed, 0);
  RngStream delay_rng(options.seed, kDelayStream);
  const double gamma = plan.gamma;

  RunReport report = start_report(plan, 0);
  Vector x = problem.initial_point();
  Vector x_read(x.size());
  report.snapshots.push_back({0, 0.0, x});

  // Update j lives in ring[j % T] until update j + T overwrites it.
  std::vector<SparseDelta> ring(t);
  std::vector<std::uint64_t> missed;
  StepDraw draw;
  SparseGradEstimate estimate;

  for (std::uint64_t k = 0; k < options.iterations; ++k) {
    delay.missed(k, delay_rng, missed);
    std::span<double> read = x;
    if (!missed.empty()) {
      x_read = x;
      for (std::uint64_t j : missed) {
        if (j >= k || k - j > t) {
          throw std::logic_error("delay model produced J(k) outside {k-1, ..., k-T}");
        }
        const SparseDelta& d = ring[j % t];
        for (std::size_t m = 0; m < d.indices.size(); ++m) x_read[d.indices[m]] -= d.values[m];
      }
      report.observed_staleness_max = std::max(report.observed_staleness_max, k - missed.front());
      read = x_read;
    }

    kernel.sample(sampler, draw);
    kernel.estimate(read, draw, estimate);
    if (observer) observer({k, x, read, missed, &draw, &estimate});

    SparseDelta* slot = t > 0 ? &ring[k % t] : nullptr;
    if (slot) {
      slot->indices.assign(estimate.indices.begin(), estimate.indices.end());
      slot->values.resize(estimate.size());
    }
    for (std::size_t m = 0; m < estimate.size(); ++m) {
      const std::size_t i = estimate.indices[m];
      const double old = x[i];
      x[i] = old - gamma * estimate.values[m];
      if (slot) slot->values[m] = x[i] - old;
    }

    if (options.snapshot_stride > 0 && (k + 1) % options.snapshot_stride == 0) {
      report.snapshots.push_back({k + 1, 0.0, x});
    }
  }

  report.k_done = options.iterations;
  report.final_x = std::move(x);
  finish_report(problem, options, report);
  return report;
}

RunReport run_async(const Problem& problem, const StepPlan& plan, std::size_t threads,
                    const RunOptions& options) {
  check_admissible(plan, options.force);
  check_iterations(options);
  const std::size_t cap = thread_cap();
  if (threads == 0 || threads > cap) {
    throw ValidationError("threads must be in [1, " + std::to_string(cap) + "], got " +
                          std::to_string(threads));
  }
  // Fail on oracle or dimension problems before any thread starts.
  { StepKernel probe(problem, plan); }

  RunReport report = start_report(plan, threads);
  const Vector x0 = problem.initial_point();
  ParamStore store(x0, read_mode_for(plan.variant));
  const std::uint64_t total = options.iterations;
  const std::uint64_t stride = options.snapshot_stride;
  const double gamma = plan.gamma;

  std::vector<std::vector<Snapshot>> worker_snapshots(threads);
  std::vector<std::uint64_t> worker_staleness(threads, 0);
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  auto worker = [&](std::size_t w) {
    try {
      StepKernel kernel(problem, plan);
      RngStream rng(options.seed, w);
      Vector x_read(x0.size());
      StepDraw draw;
      SparseGradEstimate estimate;
      std::uint64_t staleness = 0;
      while (!abort.load(std::memory_order_relaxed)) {
        const std::uint64_t k_read = store.read(x_read);
        if (k_read >= total) break;
        kernel.sample(rng, draw);
        kernel.estimate(x_read, draw, estimate);
        const std::uint64_t k = store.apply_update(estimate, gamma);
        staleness = std::max(staleness, k - k_read);
        if (stride > 0 && (k + 1) % stride == 0 && k + 1 < total) {
          worker_snapshots[w].push_back({k + 1, elapsed(), store.snapshot()});
        }
        if (k + 1 >= total) break;
      }
      worker_staleness[w] = staleness;
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      abort.store(true, std::memory_order_relaxed);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker, w);
  for (auto& th : pool) th.join();
  report.wall_time_s = elapsed();
  if (failure) std::rethrow_exception(failure);

  report.k_done = store.counter();
  report.final_x = store.snapshot();
  report.observed_staleness_max = *std::max_element(worker_staleness.begin(), worker_staleness.end());
  report.snapshots.push_back({0, 0.0, x0});
  for (auto& local : worker_snapshots) {
    for (auto& s : local) report.snapshots.push_back(std::move(s));
  }
  std::sort(report.snapshots.begin(), report.snapshots.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.k < b.k; });
  finish_report(problem, options, report);
  return report;
}

double grad_norm_sq(const Problem& problem, std::span<const double> x) {
  const Vector g = problem.has_gradient()
                       ? problem.grad_mean(x)
                       : central_difference_gradient_mean(problem, x, kTraceDifferenceStep);
  double s = 0.0;
  for (double v : g) s += v * v;
  return s;
}

void compute_traces(const Problem& problem, RunReport& report) {
  report.grad_norm_sq.clear();
  report.objective.clear();
  for (const Snapshot& s : report.snapshots) {
    report.grad_norm_sq.push_back({s.k, grad_norm_sq(problem, s.x)});
    report.objective.push_back({s.k, problem.eval_mean(s.x)});
  }
}

}  // namespace asynczoo

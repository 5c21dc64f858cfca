// Acceptance gate: one PASS/FAIL/SKIP line per criterion, each run against
// its own oracle and wall-clock budget. Exit status is nonzero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "asynczoo/engine.hpp"
#include "asynczoo/error.hpp"
#include "asynczoo/metrics.hpp"
#include "asynczoo/param_store.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"
#include "asynczoo/stepsize.hpp"
#include "asynczoo/verification.hpp"
#include "asynczoo/zeroth_order.hpp"

using namespace asynczoo;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome verdict(bool ok, const std::string& detail) {
  return {ok ? Status::pass : Status::fail, detail};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

double sq(double v) { return v * v; }

// ---------------------------------------------------------------------------
// 1. Coordinate smoothing bounds on seeded smooth functions.
// ---------------------------------------------------------------------------

// (1/2) int_{-1}^{1} p(x + v mu e_i) dv by the composite trapezoid rule on
// 4000 panels; independent of the library's Simpson rule.
double smoothed_by_trapezoid(const Problem& p, Vector x, std::size_t i, double mu) {
  const int panels = 4000;
  const double xi = x[i];
  double sum = 0.0;
  for (int s = 0; s <= panels; ++s) {
    const double v = -1.0 + 2.0 * s / panels;
    x[i] = xi + v * mu;
    sum += (s == 0 || s == panels ? 0.5 : 1.0) * p.eval(x, 0);
  }
  return sum * (2.0 / panels) / 2.0;
}

Outcome smoothing_bounds() {
  const std::size_t dim = 4;
  std::size_t value_checks = 0, value_violations = 0, grad_checks = 0, grad_violations = 0;
  double worst = 0.0;  // largest observed fraction of the bound
  RngStream rng(2718);
  for (std::uint64_t f = 0; f < 50; ++f) {
    auto p = make_smooth_test_function(dim, 1000 + f, f % 2 == 0);
    for (int point = 0; point < 10; ++point) {
      Vector x(dim);
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      const double px = p->eval(x, 0);
      for (double mu : {1e-1, 1e-2, 1e-3}) {
        for (std::size_t i = 0; i < dim; ++i) {
          const double li = p->lipschitz().coordinate(i);
          // Trapezoid error is ~ li mu^2 / (3 panels^2), far below the bound.
          const double value_gap = std::abs(smoothed_by_trapezoid(*p, x, i, mu) - px);
          const double value_bound = li * mu * mu / 2;
          ++value_checks;
          value_violations += value_gap > value_bound + 1e-13 * (1 + std::abs(px));
          worst = std::max(worst, value_gap / value_bound);

          Vector up = x, down = x;
          up[i] += mu;
          down[i] -= mu;
          const double central = (p->eval(up, 0) - p->eval(down, 0)) / (2 * mu);
          const double grad_gap = std::abs(central - p->partial(x, 0, i));
          const double grad_bound = li * mu / 2;
          ++grad_checks;
          grad_violations += grad_gap > grad_bound + 1e-13 * (1 + std::abs(px)) / mu;
          worst = std::max(worst, grad_gap / grad_bound);
        }
      }
    }
  }
  // The library's own suite (averaged form and convexity) must agree.
  std::size_t library_failures = 0;
  for (const CheckResult& c : check_smoothing_bounds({})) library_failures += !c.passed;

  return verdict(value_violations == 0 && grad_violations == 0 && library_failures == 0,
                 "value " + std::to_string(value_violations) + "/" + std::to_string(value_checks) +
                     ", gradient " + std::to_string(grad_violations) + "/" +
                     std::to_string(grad_checks) + " violations; worst ratio " + fmt(worst) +
                     "; library suite failures " + std::to_string(library_failures));
}

// ---------------------------------------------------------------------------
// 2. Block estimator equals (N/Y) grad_S F on quadratics.
// ---------------------------------------------------------------------------

Outcome estimator_exactness() {
  const std::size_t n = 20;
  auto p = make_quadratic(n, 77, 10.0, 6);
  RngStream rng(31415);
  double worst = 0.0;
  std::vector<std::size_t> pool, coords;
  for (int draw = 0; draw < 1000; ++draw) {
    Vector x(n);
    for (double& v : x) v = 2 * rng.normal();
    const std::size_t y = 1 + rng.below(n);
    sample_coordinates(rng, n, y, pool, coords);
    std::vector<double> steps(n);
    for (double& m : steps) m = rng.uniform(0.1, 1.0);
    const std::size_t xi = rng.below(p->num_components());

    const SparseGradEstimate est = estimate_block(*p, x, xi, coords, MuVector(steps));
    // Oracle gradient: A (x - c_xi) from the stored Hessian and center.
    const Vector& c = p->centers()[xi];
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t m = 0; m < coords.size(); ++m) {
      const std::size_t i = coords[m];
      double g = 0.0;
      for (std::size_t j = 0; j < n; ++j) g += p->hessian_entry(i, j) * (x[j] - c[j]);
      const double expect = static_cast<double>(n) / static_cast<double>(y) * g;
      err2 += sq(est.values[m] - expect);
      ref2 += sq(expect);
      if (est.indices[m] != i) return verdict(false, "index mismatch");
    }
    worst = std::max(worst, std::sqrt(err2 / ref2));
  }
  return verdict(worst <= 1e-12, "max relative error " + fmt(worst) + " over 1000 draws");
}

// ---------------------------------------------------------------------------
// 3. Step-size theory self-consistency.
// ---------------------------------------------------------------------------

struct TheoryOracle {
  double a1, a2, a3, chi, gamma, t_max;
};

TheoryOracle theory(const RunConfig& c) {
  const double n = c.dim, y = c.block, t = c.staleness, k = c.iterations;
  const double ly = c.lipschitz_block, lt = c.lipschitz_staleness;
  const double q = n * c.omega + c.sigma2;
  TheoryOracle o;
  o.a1 = 4 + 4 * (t * y + std::pow(y, 1.5) * t * t / std::sqrt(n)) * sq(lt) / (sq(ly) * n);
  o.a2 = y / (c.f0_minus_fstar * ly * n);
  o.a3 = (k * q * o.a2 + 4) * sq(ly) / sq(lt);
  o.chi = std::sqrt(sq(o.a1) / (k * q * o.a2 + o.a1)) + std::sqrt(k * q * o.a2);
  // Step size in the unfactored form: 1 / gamma = 2 L_Y N / Y * (...).
  o.gamma = 1.0 / (2 * ly * n / y *
                   (std::sqrt(sq(o.a1) / (k * q * o.a2 + o.a1)) + std::sqrt(k * q * o.a2)));
  o.t_max = std::sqrt(n) / (2 * std::sqrt(y)) * (std::sqrt(1 + 4 * std::sqrt(n / y) * o.a3) - 1);
  return o;
}

double theta_oracle(const RunConfig& c, double g) {
  const double n = c.dim, y = c.block, t = c.staleness;
  double sum = 0.0;
  for (std::uint64_t nu = 1; nu <= c.staleness; ++nu) {
    sum += g * (g * y + std::pow(y, 1.5) * (t - 1) * g / std::sqrt(n));
  }
  return n * g / 2 - 2 * g * g * (c.lipschitz_block / y) * n * n -
         2 * sq(c.lipschitz_staleness) * (n * n / (y * y)) * g * sum;
}

Outcome theory_consistency() {
  RngStream rng(16180);
  int accepted = 0, factor_failures = 0, theta_failures = 0, attempts = 0;
  double worst_factor = 0.0;
  while (accepted < 1000) {
    ++attempts;
    RunConfig c;
    c.dim = 1 + rng.below(500);
    c.block = 1 + rng.below(c.dim);
    c.iterations = 1 + rng.below(10'000'000);
    c.sigma2 = rng.uniform01() < 0.2 ? 0.0 : rng.uniform(0.0, 10.0);
    c.omega = rng.uniform01() < 0.5 ? 0.0 : rng.uniform(0.0, 1e-2);
    c.f0_minus_fstar = rng.uniform(0.1, 100.0);
    c.lipschitz_max = rng.uniform(0.1, 10.0);
    // Block constants grow like s^p from L_max and saturate at L.
    const double growth = rng.uniform(0.0, 1.0);
    c.lipschitz_global = c.lipschitz_max * std::pow(static_cast<double>(c.dim), rng.uniform(0.0, 1.0));
    auto block_l = [&](double s) {
      return std::clamp(c.lipschitz_max * std::pow(s, growth), c.lipschitz_max, c.lipschitz_global);
    };
    c.staleness = rng.below(60);
    c.lipschitz_block = block_l(static_cast<double>(c.block));
    c.lipschitz_staleness = block_l(static_cast<double>(std::max<std::uint64_t>(1, c.staleness)));
    const TheoryOracle o = theory(c);
    if (static_cast<double>(c.staleness) > o.t_max) continue;
    ++accepted;

    const double lib = generic_step_size(c);
    const double factored = step_size_from_chi(c, balanced_chi(c));
    const double e1 = std::abs(lib - o.gamma) / o.gamma;
    const double e2 = std::abs(factored - o.gamma) / o.gamma;
    const double e3 = std::abs(balanced_chi(c) - o.chi) / o.chi;
    worst_factor = std::max({worst_factor, e1, e2, e3});
    factor_failures += std::max({e1, e2, e3}) > 1e-12;

    const double margin = theta_oracle(c, o.gamma);
    const bool ok = margin >= -1e-12 * c.dim * o.gamma / 2;
    theta_failures += !ok || !step_size_admissible(c, lib);
  }
  return verdict(factor_failures == 0 && theta_failures == 0,
                 std::to_string(accepted) + " configs (" + std::to_string(attempts) +
                     " drawn); factorization max rel diff " + fmt(worst_factor) +
                     ", theta failures " + std::to_string(theta_failures));
}

// ---------------------------------------------------------------------------
// 4 and 6. Convergence on the N = 100, condition 10 quadratic.
// ---------------------------------------------------------------------------

std::shared_ptr<const QuadraticProblem> benchmark_quadratic() {
  return make_quadratic(100, 7, 10.0, 10);
}

// ||A (x - c_bar)||^2, the exact mean gradient norm.
double grad_norm_oracle(const QuadraticProblem& p, std::span<const double> x) {
  const std::size_t n = p.dim();
  const auto c = p.minimizer();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double g = 0.0;
    for (std::size_t j = 0; j < n; ++j) g += p.hessian_entry(i, j) * (x[j] - c[j]);
    s += g * g;
  }
  return s;
}

// (1/K) sum_{k<K} ||grad f(x_k)||^2 with every iterate observed.
double measured_ergodic(const QuadraticProblem& p, const StepPlan& plan, const DelayModel& delay,
                        std::uint64_t k, std::uint64_t seed) {
  RunOptions o;
  o.iterations = k;
  o.seed = seed;
  o.compute_traces = false;
  double sum = 0.0;
  run_simulated(p, plan, delay, o, [&](const StepEvent& e) { sum += grad_norm_oracle(p, e.x); });
  return sum / static_cast<double>(k);
}

StepPlan ascd_plan(const QuadraticProblem& p, std::uint64_t k, std::uint64_t t) {
  return make_plan(request_for(p, Variant::ascd, k, t, 0.0));
}

Outcome convergence_vs_bound() {
  auto p = benchmark_quadratic();
  const StepPlan half = ascd_plan(*p, 50000, 0), full = ascd_plan(*p, 100000, 0);
  if (!half.theta_ok || !full.theta_ok) return verdict(false, "plan step not admissible");
  const double m_half = measured_ergodic(*p, half, DelayModel::none(), 50000, 11);
  const double m_full = measured_ergodic(*p, full, DelayModel::none(), 100000, 11);
  const double ratio = m_full / m_half;
  const bool ok = m_half <= half.rate_bound && m_full <= full.rate_bound &&
                  std::abs(ratio - 0.5) <= 0.25 * 0.5;
  return verdict(ok, "K=5e4: " + fmt(m_half) + " <= " + fmt(half.rate_bound) + "; K=1e5: " +
                         fmt(m_full) + " <= " + fmt(full.rate_bound) + "; ratio " + fmt(ratio) +
                         " (target 0.5 +/- 25%)");
}

Outcome staleness_robustness() {
  auto p = benchmark_quadratic();
  const std::uint64_t k = 100000;
  std::vector<double> measured;
  std::string detail;
  for (std::uint64_t t : {0u, 4u, 16u}) {
    const StepPlan plan = ascd_plan(*p, k, t);
    if (static_cast<double>(t) > plan.t_max || !plan.theta_ok) {
      return verdict(false, "T=" + std::to_string(t) + " outside the plan's prerequisites");
    }
    measured.push_back(measured_ergodic(*p, plan, DelayModel::fixed(t), k, 13));
    detail += "T=" + std::to_string(t) + ": " + fmt(measured.back()) + "; ";
  }
  const double ratio = measured[2] / measured[0];
  return verdict(ratio < 2.0, detail + "T_max " + fmt(ascd_plan(*p, k, 16).t_max) +
                                  ", degradation " + fmt(ratio) + "x");
}

// ---------------------------------------------------------------------------
// 5. Zeroth-order trajectory approaches the exact-gradient one.
// ---------------------------------------------------------------------------

Outcome zeroth_order_limit() {
  auto p = benchmark_quadratic();
  const std::uint64_t k = 10000;
  PlanRequest exact = request_for(*p, Variant::asgd_inconsistent, k, 0, 0.0);
  exact.sigma2 = 1.0;
  const StepPlan exact_plan = make_plan(exact);
  PlanRequest zo = request_for(*p, Variant::aszd, k, 0, 1.0);
  zo.mu = MuVector::uniform(p->dim(), 1e-6);
  zo.gamma = exact_plan.gamma;
  const StepPlan zo_plan = make_plan(zo);

  RunOptions o;
  o.iterations = k;
  o.seed = 21;
  o.compute_traces = false;
  const RunReport a = run_simulated(*p, exact_plan, DelayModel::none(), o);
  const RunReport b = run_simulated(*p, zo_plan, DelayModel::none(), o);
  double dev = 0.0, moved = 0.0;
  for (std::size_t i = 0; i < p->dim(); ++i) {
    dev = std::max(dev, std::abs(a.final_x[i] - b.final_x[i]));
    moved = std::max(moved, std::abs(a.final_x[i]));
  }
  return verdict(dev < 1e-4, "max coordinate deviation " + fmt(dev) + " after 1e4 steps (max |x| " +
                                 fmt(moved) + ")");
}

// ---------------------------------------------------------------------------
// 7. Threaded speedup on the black box.
// ---------------------------------------------------------------------------

Outcome speedup_shape() {
  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 4) {
    return {Status::skip, "needs >= 4 cores, this machine reports " + std::to_string(cores)};
  }
  auto p = make_noisy_blackbox({8, 4, 2}, 200, 1, 0.1);
  const std::uint64_t k = 1'000'000;
  PlanRequest r = request_for(*p, Variant::aszd, k, 4, 0.0);
  r.sigma2 = 1.0;
  const StepPlan plan = make_plan(r);
  RunOptions o;
  o.iterations = k;
  o.seed = 3;
  o.compute_traces = false;
  o.force = true;
  std::vector<RunReport> reports;
  for (std::size_t t : {1u, 2u, 4u}) reports.push_back(run_async(*p, plan, t, o));
  const SpeedupTable table = speedup(reports, SpeedupMode::fixed_k);
  const double rts4 = table.rows.back().rts;
  return verdict(rts4 >= 2.4, "RTS(2) " + fmt(table.rows[1].rts) + ", RTS(4) " + fmt(rts4) +
                                  " (need >= 2.4)");
}

// ---------------------------------------------------------------------------
// 8. Blend recovery.
// ---------------------------------------------------------------------------

double rmse_oracle(const BlendData& d, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t r = 0; r < d.rows; ++r) {
    double pred = 0.0;
    for (std::size_t m = 0; m < d.models; ++m) pred += d.prediction(r, m) * x[m];
    s += sq(pred - d.ratings[r]);
  }
  return std::sqrt(s / static_cast<double>(d.rows));
}

Outcome blend_recovery() {
  const double noise = 0.5;
  auto p = make_blend(4000, 50, 5, noise);
  const std::uint64_t k = 200000;
  const StepPlan plan = make_plan(request_for(*p, Variant::aszd, k, 0, 0.0));
  RunOptions o;
  o.iterations = k;
  o.seed = 5;
  o.snapshot_stride = 100;
  o.compute_traces = false;
  const RunReport rep = run_simulated(*p, plan, DelayModel::none(), o);

  const Vector x0 = p->initial_point();
  if (std::any_of(x0.begin(), x0.end(), [](double v) { return v != 0.0; })) {
    return verdict(false, "blend does not start from x = 0");
  }
  double prev = INFINITY;
  std::size_t rises = 0, windows = 0;
  for (const Snapshot& s : rep.snapshots) {
    if (s.k > 5000) break;
    const double r = rmse_oracle(p->train(), s.x);
    rises += r > prev;
    ++windows;
    prev = r;
  }
  const double heldout = rmse_oracle(p->holdout(), rep.final_x);
  const bool near_floor = std::abs(heldout - noise) <= 0.1 * noise;
  return verdict(near_floor && rises == 0,
                 "held-out RMSE " + fmt(heldout) + " at k=2e5 (floor " + fmt(noise) +
                     "); training RMSE rose in " + std::to_string(rises) + " of " +
                     std::to_string(windows - 1) + " 100-step windows before k=5e3");
}

// ---------------------------------------------------------------------------
// 9. No lost updates.
// ---------------------------------------------------------------------------

Outcome no_lost_updates() {
  const double gamma = std::ldexp(1.0, -10);
  const int workers = 8, each = 100000;
  const double x0 = 5.0;
  ParamStore store(Vector{x0, 0.0}, ReadMode::inconsistent);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int m = 0; m < each; ++m) store.apply_delta(0, -gamma);
    });
  }
  for (auto& t : pool) t.join();
  const Vector x = store.snapshot();
  const double expect = x0 - gamma * workers * each;
  const bool ok = x[0] == expect && x[1] == 0.0 &&
                  store.counter() == static_cast<std::uint64_t>(workers) * each;
  char buf[160];
  std::snprintf(buf, sizeof buf, "x0 = %.17g, expected %.17g; counter %llu", x[0], expect,
                static_cast<unsigned long long>(store.counter()));
  return verdict(ok, buf);
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "smoothing bounds", 10, smoothing_bounds},
      {2, "estimator exactness", 5, estimator_exactness},
      {3, "step-size theory", 5, theory_consistency},
      {4, "convergence vs bound", 60, convergence_vs_bound},
      {5, "zeroth-order limit", 30, zeroth_order_limit},
      {6, "staleness robustness", 60, staleness_robustness},
      {7, "speedup shape", 300, speedup_shape},
      {8, "blend recovery", 120, blend_recovery},
      {9, "no lost updates", 30, no_lost_updates},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {Status::fail, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.status != Status::skip && secs > c.budget_s) {
      out.status = Status::fail;
      out.detail += "; over the " + fmt(c.budget_s) + " s budget";
    }
    const char* tag = out.status == Status::pass ? "PASS" : out.status == Status::fail ? "FAIL" : "SKIP";
    failures += out.status == Status::fail;
    char head[96];
    std::snprintf(head, sizeof head, "%s  %d  %-22s %7.2fs  ", tag, c.id, c.name, secs);
    std::cout << head << out.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

#include <benchmark/benchmark.h>

#include <cmath>

#include "asynczoo/engine.hpp"
#include "asynczoo/param_store.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"
#include "asynczoo/stepsize.hpp"
#include "asynczoo/zeroth_order.hpp"

using namespace asynczoo;

namespace {

SparseGradEstimate block_update(std::size_t dim, std::size_t block) {
  SparseGradEstimate e;
  for (std::size_t j = 0; j < block; ++j) {
    e.indices.push_back(j * dim / block);
    e.values.push_back(std::ldexp(1.0, -20));
  }
  return e;
}

void BM_StoreApply(benchmark::State& state) {
  const auto mode = state.range(0) ? ReadMode::consistent : ReadMode::inconsistent;
  ParamStore s(Vector(1000, 0.0), mode);
  const SparseGradEstimate e = block_update(1000, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(s.apply_update(e, 1e-3));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StoreApply)->ArgsProduct({{0, 1}, {1, 16}})->ThreadRange(1, 4);

void BM_StoreRead(benchmark::State& state) {
  const auto mode = state.range(0) ? ReadMode::consistent : ReadMode::inconsistent;
  ParamStore s(Vector(1000, 1.0), mode);
  Vector out(1000);
  for (auto _ : state) {
    s.read(out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(state.iterations() * 1000 * sizeof(double));
}
BENCHMARK(BM_StoreRead)->Arg(0)->Arg(1);

void BM_BlockEstimate(benchmark::State& state) {
  const std::size_t n = 100, y = static_cast<std::size_t>(state.range(0));
  auto p = make_quadratic(n, 1, 10.0, 10);
  RngStream rng(9);
  Vector x(n);
  for (double& v : x) v = rng.normal();
  std::vector<std::size_t> pool, coords;
  sample_coordinates(rng, n, y, pool, coords);
  const MuVector mu = MuVector::uniform(n, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_block(*p, x, 0, coords, mu));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * y));
}
BENCHMARK(BM_BlockEstimate)->Arg(1)->Arg(10)->Arg(100);

void BM_SimulatedRun(benchmark::State& state) {
  auto p = make_quadratic(100, 7, 10.0, 10);
  const std::uint64_t k = 20000, t = static_cast<std::uint64_t>(state.range(0));
  const StepPlan plan = make_plan(request_for(*p, Variant::ascd, k, t, 0.0));
  RunOptions o;
  o.iterations = k;
  o.compute_traces = false;
  const DelayModel delay = t == 0 ? DelayModel::none() : DelayModel::fixed(t);
  for (auto _ : state) benchmark::DoNotOptimize(run_simulated(*p, plan, delay, o).final_x);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k));
}
BENCHMARK(BM_SimulatedRun)->Arg(0)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_AsyncRun(benchmark::State& state) {
  auto p = make_noisy_blackbox({8, 4, 2}, 200, 1, 0.1);
  const std::uint64_t k = 20000;
  PlanRequest r = request_for(*p, Variant::aszd, k, 4, 0.0);
  r.sigma2 = 1.0;
  const StepPlan plan = make_plan(r);
  RunOptions o;
  o.iterations = k;
  o.compute_traces = false;
  o.force = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_async(*p, plan, static_cast<std::size_t>(state.range(0)), o).k_done);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k));
}
BENCHMARK(BM_AsyncRun)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();

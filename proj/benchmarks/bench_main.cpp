#include <benchmark/benchmark.h>

#include <cmath>

#include "fireline/lattice_ffp.hpp"
#include "fireline/limit_lffp.hpp"
#include "fireline/rescale_couple.hpp"
#include "fireline/vacant_set.hpp"

using namespace fireline;

// One lattice replica to rescaled time 3 on A = 5.
static void BM_LatticeRun(benchmark::State& state) {
  const double lambda = std::pow(10.0, -static_cast<double>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto config = make_lattice_config(lambda, 5.0, 3.0 * std::log(1.0 / lambda), seed++);
    RunOptions options;
    options.record_burns = false;
    auto result = run(config, options);
    benchmark::DoNotOptimize(result.final_state.vacant_count());
  }
  state.SetLabel("lambda=1e-" + std::to_string(state.range(0)));
}
BENCHMARK(BM_LatticeRun)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

// Limit process timeline on [-A, A] x [0, 3].
static void BM_LimitSimulate(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto marks = sample_marks(3.0, a, {seed++, "marks"});
    auto tl = simulate(a, 3.0, marks);
    benchmark::DoNotOptimize(tl.events().size());
  }
}
BENCHMARK(BM_LimitSimulate)->Arg(5)->Arg(30)->Unit(benchmark::kMicrosecond);

// Only the state at time t, as used by the tail estimators.
static void BM_LimitStateAt(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto marks = sample_marks(2.5, 30.0, {seed++, "marks"});
    const auto st = state_at_time(30.0, marks, 2.0);
    benchmark::DoNotOptimize(st.cluster_at(2.0, 0.0));
  }
}
BENCHMARK(BM_LimitStateAt)->Unit(benchmark::kMicrosecond);

static void BM_CoupledRun(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto r = coupled_run(1e-3, 5.0, 3.0, seed, seed + 1, {0.0});
    seed += 2;
    benchmark::DoNotOptimize(r.probes.front().distance.total());
  }
}
BENCHMARK(BM_CoupledRun)->Unit(benchmark::kMillisecond);

// Erase-all then bulk refill, the pattern of growth followed by a large burn.
static void BM_VacantSetChurn(benchmark::State& state) {
  const auto n = state.range(0);
  VacantSet set(-n, n, true);
  for (auto _ : state) {
    for (std::int64_t i = -n; i <= n; i += 3) set.erase(i);
    benchmark::DoNotOptimize(set.floor(0));
    benchmark::DoNotOptimize(set.ceil(0));
    set.insert_range(-n, n);
  }
  state.SetItemsProcessed(state.iterations() * (2 * n + 1) / 3);
}
BENCHMARK(BM_VacantSetChurn)->Arg(1 << 10)->Arg(1 << 14);

static void BM_VacantSetNeighbors(benchmark::State& state) {
  const std::int64_t n = 1 << 14;
  VacantSet set(-n, n, false);
  for (std::int64_t i = -n; i <= n; i += 997) set.insert(i);
  std::int64_t probe = -n;
  for (auto _ : state) {
    benchmark::DoNotOptimize(set.floor(probe));
    benchmark::DoNotOptimize(set.ceil(probe));
    probe = probe + 7919 > n ? -n : probe + 7919;
  }
}
BENCHMARK(BM_VacantSetNeighbors);
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "ikwsms/dgp.hpp"
#include "ikwsms/estimator.hpp"
#include "ikwsms/first_stage.hpp"
#include "ikwsms/inference.hpp"
#include "ikwsms/kernels.hpp"
#include "ikwsms/objective.hpp"

using namespace ikwsms;

namespace {

Dataset sample(std::size_t n) {
  DgpSpec spec;
  spec.n = n;
  spec.seed = 1;
  return generate_dataset(spec);
}

Bandwidths fixed_bw() {
  Bandwidths bw;
  bw.h = 1.2;
  bw.h_v = 0.2;
  return bw;
}

}  // namespace

static void BM_Kernels(benchmark::State& state) {
  double t = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::smooth_g(t) + kernels::smooth_g_prime(t) + kernels::kernel_k(t));
    t = t > 3.0 ? -3.0 : t + 1e-3;
  }
}
BENCHMARK(BM_Kernels);

static void BM_ObjectiveGradient(benchmark::State& state) {
  const Dataset d = sample(std::size_t(state.range(0)));
  const LocalObjective obj(d, 0.5, 1.2, 0.2);
  Eigen::VectorXd theta(2), grad;
  theta << 0.0, 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(obj.value_and_gradient(theta, grad));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ObjectiveGradient)->Arg(250)->Arg(1000)->Arg(4000);

static void BM_FirstStageSolve(benchmark::State& state) {
  const Dataset d = sample(std::size_t(state.range(0)));
  const ThetaDomain dom = ThetaDomain::cube(2, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_first_stage(d, 0.5, fixed_bw(), dom, SolverOptions{}, 1));
  }
}
BENCHMARK(BM_FirstStageSolve)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Estimate(benchmark::State& state) {
  const Dataset d = sample(std::size_t(state.range(0)));
  const EstimatorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(estimate(d, cfg, fixed_bw()));
}
BENCHMARK(BM_Estimate)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_BootstrapTest(benchmark::State& state) {
  const Dataset d = sample(250);
  BootstrapConfig cfg;
  cfg.bandwidths = fixed_bw();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_t_test(d, cfg, 0, 1.0, int(state.range(0)), 0.05, 7));
  }
}
BENCHMARK(BM_BootstrapTest)->Arg(19)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "fcd/driver.hpp"
#include "fcd/synthetic.hpp"

namespace {

using namespace fcd;

const SyntheticQuadratic& quad_instance() {
  static SyntheticQuadratic q = generate_quadratic({500, 600, 100.0, 0.2, 42});
  return q;
}

const CompositeProblem& lasso_problem() {
  static CompositeProblem p(
      SmoothLoss::quadratic(quad_instance().A, quad_instance().b),
      SeparableRegularizer::l1(0.1));
  return p;
}

void bench_prox_l1(benchmark::State& state) {
  auto reg = SeparableRegularizer::l1(0.1);
  double z = 0.37;
  for (auto _ : state) {
    z = reg.prox_coordinate(z + 1.0, 2.0);
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(bench_prox_l1);

void bench_partial_gradient(benchmark::State& state) {
  const auto& p = lasso_problem();
  Evaluator ev(p, Vec(static_cast<std::size_t>(p.dimension()), 0.1));
  TauNiceSampler sampler(p.dimension(), static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    auto S = sampler.sample();
    benchmark::DoNotOptimize(ev.partial_gradient(S));
  }
}
BENCHMARK(bench_partial_gradient)->Arg(1)->Arg(16)->Arg(64);

void bench_fcd_iteration(benchmark::State& state) {
  const auto& p = lasso_problem();
  FcdConfig cfg;
  cfg.tau = static_cast<int>(state.range(0));
  cfg.seed = 11;
  cfg.curvature = CurvatureStrategy::diagonal();
  cfg.inner.method = InnerMethod::ClosedForm;
  cfg.inner.eta = 0.0;
  for (auto _ : state) {
    state.PauseTiming();
    Vec x0(static_cast<std::size_t>(p.dimension()), 0.0);
    cfg.max_iters = 100;
    state.ResumeTiming();
    benchmark::DoNotOptimize(fcd_run(p, x0, cfg));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(bench_fcd_iteration)->Arg(1)->Arg(16);

}  // namespace

BENCHMARK_MAIN();

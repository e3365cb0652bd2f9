#include <benchmark/benchmark.h>

#include <random>

#include "ancova/bootstrap.hpp"
#include "ancova/distributions.hpp"
#include "ancova/hypotheses.hpp"
#include "ancova/inference.hpp"
#include "ancova/model.hpp"
#include "ancova/simulation.hpp"

using namespace ancova;

namespace {

Dataset make_dataset(std::size_t per_group) {
  SimulationScenario s;
  s.group_sizes = {per_group, per_group, per_group, per_group};
  s.variances.kind = VarianceScenarioKind::II;
  s.mu = Vector(4);
  SplitRng stream = SplitRng::from(1234).split(0);
  return generate_dataset(s, stream);
}

}  // namespace

static void BM_FitOls(benchmark::State& state) {
  const Dataset data = make_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_ols(data));
  }
  state.SetItemsProcessed(state.iterations() * data.n_total());
}
BENCHMARK(BM_FitOls)->Arg(5)->Arg(15)->Arg(40);

static void BM_SandwichHC2(benchmark::State& state) {
  const Dataset data = make_dataset(static_cast<std::size_t>(state.range(0)));
  const FittedModel model = fit_ols(data);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sandwich(model, Flavor::HC2));
  }
}
BENCHMARK(BM_SandwichHC2)->Arg(15)->Arg(40);

static void BM_WhiteTest(benchmark::State& state) {
  const Dataset data = make_dataset(15);
  const FittedModel model = fit_ols(data);
  const HypothesisSpec hyp = equal_means_contrast(4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(white_test(model, hyp, Flavor::HC2));
  }
}
BENCHMARK(BM_WhiteTest);

static void BM_WildBootstrap(benchmark::State& state) {
  const Dataset data = make_dataset(static_cast<std::size_t>(state.range(0)));
  const FittedModel model = fit_ols(data);
  const HypothesisSpec hyp = equal_means_contrast(4, 2);
  BootstrapConfig cfg;
  cfg.replications = 1000;
  cfg.seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wild_bootstrap_test(model, hyp, cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.replications);
}
BENCHMARK(BM_WildBootstrap)->Arg(5)->Arg(15)->Arg(40);

static void BM_ChisqSf(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chisq_sf(x, 3));
    x += 0.1;
    if (x > 30.0) x = 0.1;
  }
}
BENCHMARK(BM_ChisqSf);

BENCHMARK_MAIN();

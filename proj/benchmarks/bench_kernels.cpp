#include <benchmark/benchmark.h>

#include "downcross/analysis.hpp"
#include "downcross/pathsim.hpp"
#include "downcross/scale.hpp"

using namespace downcross;

namespace {

ScaleFunction loglog(double gamma) {
  return ScaleFunction(DiffusionModel(DriftFamily::logloglog(1.0, gamma)));
}

void BM_LogHazard(benchmark::State& state) {
  const auto sf = loglog(1.5);
  const double x = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(log_hazard(sf, 1.0, x));
}
BENCHMARK(BM_LogHazard)->Arg(2)->Arg(12)->Arg(300);

void BM_HazardIntegral(benchmark::State& state) {
  const HazardCurve h(loglog(2.0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(h.integral(20.0, 20.0 + static_cast<double>(state.range(0))));
}
BENCHMARK(BM_HazardIntegral)->Arg(1)->Arg(10)->Arg(100);

void BM_ProductOracle(benchmark::State& state) {
  const OnsetLaw law(HazardCurve(ScaleFunction(DiffusionModel(DriftFamily::constant(1.0))), 1.0),
                     0.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(onset_survival_product_oracle(law, 1.0, n));
}
BENCHMARK(BM_ProductOracle)->Arg(10)->Arg(100)->Arg(1000);

void BM_Classify(benchmark::State& state) {
  ClassifierOptions o;
  o.compute_partial_integral = false;
  for (auto _ : state) {
    // A fresh scale function each time so the checkpoint cache starts empty.
    benchmark::DoNotOptimize(classify_downcrossing(loglog(2.0), 1.0, o));
  }
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_PathSteps(benchmark::State& state) {
  const DiffusionModel model(DriftFamily::constant(0.5));
  PathConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 10.0;
  cfg.monitoring = state.range(0) ? Monitoring::BrownianBridge : Monitoring::Discrete;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(simulate_path(model, cfg, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_PathSteps)->Arg(0)->Arg(1);

void BM_LiteralTracker(benchmark::State& state) {
  const DiffusionModel model(DriftFamily::constant(0.3));
  PathConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 10.0;
  cfg.track_literal = true;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_path(model, cfg, 1.0));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_LiteralTracker);

}  // namespace

BENCHMARK_MAIN();

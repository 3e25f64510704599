#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "holeburn/afc.hpp"
#include "holeburn/fitkit.hpp"
#include "holeburn/levels.hpp"
#include "holeburn/pumpdyn.hpp"

using namespace holeburn;

namespace {

SpinSystem bench_system() {
  SpinSystem sys;
  sys.nuclear_spin = 3.5;
  sys.g_factor = 1.47;
  sys.hyperfine_A_GHz = 0.8;
  return sys;
}

std::vector<DecayCurve> bench_curves() {
  std::vector<DecayCurve> curves;
  for (int c = 0; c < 8; ++c) {
    DecayCurve curve;
    const double df = 0.9 - 0.08 * c, ds = 0.15 + 0.09 * c;
    for (int i = 0; i < 30; ++i) {
      const double t = 1e-3 * std::pow(8e3, i / 29.0);
      curve.points.push_back(
          {t, df * std::exp(-t / 0.075) + ds * std::exp(-t / 1.72), 0.0});
    }
    curves.push_back(curve);
  }
  return curves;
}

void BM_GroundPropagatorBuild(benchmark::State& state) {
  const auto sys = bench_system();
  const FieldPoint fp{1.0, 3.0};
  const auto levels = enumerate_levels(sys, fp);
  const RateMatrix g = build_generator(levels, {8.0, 0.4, 0.3}, fp);
  const Eigen::VectorXd pi = thermal_populations(levels, fp);
  for (auto _ : state) {
    GroundPropagator prop(g, pi);
    benchmark::DoNotOptimize(prop.slowest_lifetime_s());
  }
}
BENCHMARK(BM_GroundPropagatorBuild);

void BM_GroundPropagatorEvaluate(benchmark::State& state) {
  const auto sys = bench_system();
  const FieldPoint fp{1.0, 3.0};
  const auto levels = enumerate_levels(sys, fp);
  const RateMatrix g = build_generator(levels, {8.0, 0.4, 0.3}, fp);
  const Eigen::VectorXd pi = thermal_populations(levels, fp);
  const GroundPropagator prop(g, pi);
  Eigen::VectorXd p0 = Eigen::VectorXd::Constant(levels.size(), 1.0 / 16.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prop.at(p0, 0.1));
  }
}
BENCHMARK(BM_GroundPropagatorEvaluate);

void BM_SimulateBurn(benchmark::State& state) {
  const auto sys = bench_system();
  const FieldPoint fp{1.0, 3.0};
  const auto levels = enumerate_levels(sys, fp);
  const RateMatrix g = build_generator(levels, {8.0, 0.4, 0.3}, fp);
  PumpSchedule sched;
  sched.burn_duration_s = 0.05;
  sched.pump_rate = 2000.0;
  sched.pumped_levels = {3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_burn(g, levels, sys, {0.1, 0.5}, sched, fp));
  }
}
BENCHMARK(BM_SimulateBurn);

void BM_BiexpGlobalFit(benchmark::State& state) {
  const auto curves = bench_curves();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_biexp_global(curves));
  }
}
BENCHMARK(BM_BiexpGlobalFit);

void BM_BiexpObjective(benchmark::State& state) {
  const auto curves = bench_curves();
  for (auto _ : state) {
    benchmark::DoNotOptimize(biexp_objective(curves, 0.075, 1.72));
  }
}
BENCHMARK(BM_BiexpObjective);

void BM_MaxEfficiency(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_efficiency(0.013));
  }
}
BENCHMARK(BM_MaxEfficiency);

}  // namespace

BENCHMARK_MAIN();

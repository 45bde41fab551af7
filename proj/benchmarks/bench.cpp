#include <benchmark/benchmark.h>

#include "../tests/fields.hpp"
#include "qhj/dynamics.hpp"
#include "qhj/metric.hpp"

using namespace qhj;

static void BM_Sample2D(benchmark::State& state) {
  const ReducedActionField act(fixtures::field_2d(), 1.5, 0.5);
  Vec3 r{0.2, 0.1, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(act, r));
    r[0] += 1e-9;
  }
}
BENCHMARK(BM_Sample2D);

static void BM_Sample3D(benchmark::State& state) {
  const ReducedActionField act(fixtures::plane_wave_3d(1.0, 0.7, 1.3), 1.5, -0.3);
  const Vec3 r{0.1, 0.2, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(sample(act, r));
}
BENCHMARK(BM_Sample3D);

static void BM_VelocityField(benchmark::State& state) {
  const ReducedActionField act(fixtures::field_2d(), 1.0, 0.0);
  const Vec3 r{0.3, 0.9, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(velocity_field(act, r));
}
BENCHMARK(BM_VelocityField);

static void BM_MetricAndJacobian(benchmark::State& state) {
  const ReducedActionField act(fixtures::plane_wave_3d(1.0, 0.7, 1.3), 1.5, -0.3);
  const Vec3 r{0.1, 0.2, 0.3};
  for (auto _ : state) {
    const QuantumMetric m = metric_at(act, r);
    benchmark::DoNotOptimize(verify_transformation(canonical_jacobian(m), m));
  }
}
BENCHMARK(BM_MetricAndJacobian);

static void BM_NumerovHarmonic(benchmark::State& state) {
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fixtures::harmonic_pair(step));
}
BENCHMARK(BM_NumerovHarmonic)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_TrajectoryFirstOrder(benchmark::State& state) {
  const ReducedActionField act(fixtures::plane_wave_3d(1.0, 0.7, 1.3), 1.5, -0.3);
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_first_order(act, {0.1, 0.2, 0.3}, cfg));
}
BENCHMARK(BM_TrajectoryFirstOrder)->Unit(benchmark::kMillisecond);

static void BM_TrajectorySecondOrder(benchmark::State& state) {
  const ReducedActionField act(fixtures::plane_wave_3d(1.0, 0.7, 1.3), 1.5, -0.3);
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_second_order(act, {0.1, 0.2, 0.3}, cfg));
}
BENCHMARK(BM_TrajectorySecondOrder)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

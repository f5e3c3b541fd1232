#include <benchmark/benchmark.h>

#include <random>

#include "rectiscan/datasets.hpp"
#include "rectiscan/geometry.hpp"
#include "rectiscan/square_functions.hpp"
#include "rectiscan/transport.hpp"

using namespace rectiscan;

namespace {

DiscreteMeasure plane(std::size_t points) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Plane;
  spec.d = 3;
  spec.n = 2;
  spec.points = points;
  return generate(spec);
}

void BM_BallMass(benchmark::State& state) {
  const DiscreteMeasure m = plane(static_cast<std::size_t>(state.range(0)));
  const SpatialIndex index(m);
  const std::vector<double> c{0.5, 0.5, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(index.ball_mass(c, 0.1));
}
BENCHMARK(BM_BallMass)->Arg(10000)->Arg(250000);

void BM_DeltaSmoothField(benchmark::State& state) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Segment;
  spec.points = 20001;
  const DiscreteMeasure m = generate(spec);
  const SpatialIndex index(m);
  const CenterSample centers = sample_centers(m, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> scales = geometric_grid(0.01, 0.1, 2.0);
  const Functional f = Functional::parse("delta-smooth", KernelSpec::gaussian(1, 1));
  for (auto _ : state)
    benchmark::DoNotOptimize(coefficient_field(m, index, f, centers, scales).values.data());
}
BENCHMARK(BM_DeltaSmoothField)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FlatNorm(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Atoms a, b;
  a.d = b.d = 2;
  const auto count = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < count; ++i) {
    a.add(std::vector<double>{u(rng), 0.1 * u(rng)}, 1.0);
    b.add(std::vector<double>{u(rng), 0.0}, 1.0);
  }
  const std::vector<double> c{0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(flat_norm_distance(a, b, c, 2.0));
}
BENCHMARK(BM_FlatNorm)->Arg(50)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

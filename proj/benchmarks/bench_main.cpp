#include <benchmark/benchmark.h>

#include "schrolab/czd.hpp"
#include "schrolab/experiments.hpp"
#include "schrolab/geometry.hpp"
#include "schrolab/weights.hpp"

using namespace schrolab;

namespace {

GridFunction noise(const Domain& d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(d.size());
  for (auto& x : v) x = rng.normal();
  return GridFunction(d, v);
}

void BM_RhoField(benchmark::State& state) {
  const Domain d(3, 6.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(critical_radius_field(Potential::hermite(3), d));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.size()));
}
BENCHMARK(BM_RhoField)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BuildRiesz(benchmark::State& state) {
  const Domain d(3, 3.0, static_cast<int>(state.range(0)));
  const auto v = Potential::hermite(3).sample(d);
  for (auto _ : state) benchmark::DoNotOptimize(build_riesz(v));
}
BENCHMARK(BM_BuildRiesz)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ExactP2(benchmark::State& state) {
  const Domain d(3, 3.0, static_cast<int>(state.range(0)));
  const auto r = build_riesz(Potential::hermite(3).sample(d));
  const auto t = commutator(*r, sample(d, [](const Point& x) { return x[0] * x[0]; }));
  const auto w = GridFunction::constant(d, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_operator_norm(t, 2.0, w, NormMethod::kExactP2));
}
BENCHMARK(BM_ExactP2)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_NonlinearPower(benchmark::State& state) {
  const Domain d(3, 3.0, 8);
  const auto r = build_riesz(Potential::hermite(3).sample(d));
  const auto t = commutator(*r, sample(d, [](const Point& x) { return x[0] * x[0]; }));
  const auto w = GridFunction::constant(d, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_operator_norm(t, 3.0, w, NormMethod::kNonlinearPower));
}
BENCHMARK(BM_NonlinearPower)->Unit(benchmark::kMillisecond);

void BM_MaximalProfile(benchmark::State& state) {
  const Domain d(3, 2.0, static_cast<int>(state.range(0)));
  const auto f = noise(d, 1);
  const auto rho = GridFunction::constant(d, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(MaximalProfile(f, rho).evaluate(1.0));
}
BENCHMARK(BM_MaximalProfile)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const Domain d(3, 2.0, static_cast<int>(state.range(0)));
  const auto f = noise(d, 2);
  const auto rho = GridFunction::constant(d, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(f, rho, 1.5, 1.0));
}
BENCHMARK(BM_Decompose)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ApConstant(benchmark::State& state) {
  const Domain d(3, 2.0, 16);
  const auto w = sample(d, [](const Point& x) { return std::sqrt(1.0 + norm(x, 3)); });
  const auto rho = GridFunction::constant(d, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(ap_constant(w, 2.0, 1.0, RegionMode::kAllBalls, rho, BallSampleSpec{}));
}
BENCHMARK(BM_ApConstant)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

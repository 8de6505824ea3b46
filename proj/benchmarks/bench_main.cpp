#include <benchmark/benchmark.h>

#include "distval/boundedness.hpp"
#include "distval/limitlab.hpp"
#include "distval/pairing.hpp"
#include "distval/pointvalue.hpp"

using namespace distval;

static void BM_PairSmooth(benchmark::State& state) {
  const Distribution f = Distribution::regular1(parse("cos(3*x)*exp(x)"));
  const TestFunction phi = affine_bump(0.1, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(pair(f, phi).value);
}
BENCHMARK(BM_PairSmooth);

static void BM_PairOscillatory(benchmark::State& state) {
  const Distribution f = Distribution::regular1(parse("sin(1/x)"));
  const TestFunction phi = affine_bump(0.3, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(pair(f, phi).value);
}
BENCHMARK(BM_PairOscillatory);

static void BM_Pair2d(benchmark::State& state) {
  const Distribution f = Distribution::regular2(parse("x*y/(x^2+y^2)"));
  const TestFunction phi = affine_bump({0.35, 0.35}, 0.6, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pair(f, phi).value);
}
BENCHMARK(BM_Pair2d);

static void BM_LojasiewiczHeaviside(benchmark::State& state) {
  const Distribution f = Distribution::regular1(parse("chi(0,inf)"));
  LimitOptions opt;
  opt.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(lojasiewicz_value(f, {0.0, 0.0}, default_basis(1), default_eps_grid(), opt).verdict.tag);
}
BENCHMARK(BM_LojasiewiczHeaviside)->Unit(benchmark::kMillisecond);

static void BM_ScalingProbe(benchmark::State& state) {
  const Expr f = parse("sin(2*pi*ln(x))");
  const Expr xi = parse("n");
  for (auto _ : state)
    benchmark::DoNotOptimize(scaling_probe(f, xi, {0.5, 1.0, 2.0, 4.0}, static_cast<std::size_t>(state.range(0))).constancy);
}
BENCHMARK(BM_ScalingProbe)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ProbeLadder(benchmark::State& state) {
  const Distribution f = Distribution::regular1(parse("ln(abs(x))"));
  LadderOptions opt;
  opt.budget = static_cast<std::size_t>(state.range(0));
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(probe_ladder(f, {{-1.0, 0.0}, {1.0, 0.0}}, opt).used);
}
BENCHMARK(BM_ProbeLadder)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

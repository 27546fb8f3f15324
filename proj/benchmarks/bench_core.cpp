#include <benchmark/benchmark.h>

#include <random>

#include "anholo/clocksim.hpp"
#include "anholo/models.hpp"
#include "anholo/numerics.hpp"
#include "anholo/passage.hpp"
#include "anholo/spectral.hpp"

using namespace anholo;

namespace {

CMatrix random_hermitian(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> g;
  CMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = Complex(g(rng), g(rng));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

void BM_EigHermitian(benchmark::State& state) {
  const CMatrix h = random_hermitian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(h));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigHermitian)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMillisecond)->Complexity();

void BM_EigUnitary(benchmark::State& state) {
  FairGroverParams p;
  p.n = state.range(0);
  const auto a = full_grover(p, 1, 3.0);
  const CMatrix u = a.system.at(1.3);
  for (auto _ : state) benchmark::DoNotOptimize(eig_unitary(u));
}
BENCHMARK(BM_EigUnitary)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TrackFairThreeLevel(benchmark::State& state) {
  FairGroverParams p;
  p.n = 10000;
  const auto sys = fair_grover_effective(p);
  for (auto _ : state) benchmark::DoNotOptimize(track_curves(sys, 0.0, kTwoPi, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TrackFairThreeLevel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_TrackFullGrover(benchmark::State& state) {
  FairGroverParams p;
  p.n = state.range(0);
  const auto a = full_grover(p, 1, 3.0);
  TrackOptions opt;
  opt.store_vectors = false;
  for (auto _ : state) benchmark::DoNotOptimize(track_curves(a.system, 0.0, kTwoPi, 200, opt));
}
BENCHMARK(BM_TrackFullGrover)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PassageThreeLevel(benchmark::State& state) {
  const auto sys = fair_grover_effective(FairGroverParams{});
  const auto sched = linear_schedule(kTwoPi, static_cast<int>(state.range(0)));
  const CVector minus = CVector::basis(3, 0), plus = CVector::basis(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_passage(sys, sched, minus, plus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PassageThreeLevel)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PassageClockBell(benchmark::State& state) {
  ClockCircuit c;
  c.n = 2;
  c.gates = {gate_h(0), gate_cnot(0, 1)};
  const auto problem = compose_circuit_aaqc(c);
  const auto sched = linear_schedule(kTwoPi, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_passage(*problem.map, sched, problem.minus, problem.plus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PassageClockBell)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

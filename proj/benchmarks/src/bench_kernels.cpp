// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "isac/admm.hpp"
#include "isac/driver.hpp"
#include "isac/objective.hpp"

namespace {

using namespace isac;

struct Fixture {
  Scenario s = default_scenario();
  Channel ch = generate_channel(s);
  SymbolMatrix sym = generate_symbols(s);
  Waveform x0 = lfm_reference(s);
  ReceiveFilter w = mvdr_filter(x0, s);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_Mvdr(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(mvdr_filter(f.x0, f.s));
}
BENCHMARK(BM_Mvdr);

void BM_SensingMatrices(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(build_sensing_matrices(f.w, f.s, 0));
}
BENCHMARK(BM_SensingMatrices);

void BM_QcqpSolve(benchmark::State& state) {
  const auto& f = fixture();
  const SensingMatrices m = build_sensing_matrices(f.w, f.s, 0);
  const QcqpBlock block = QcqpBlock::from_factors(m.interference_factor, m.target_factor,
                                                  {f.s.target_power, f.s.rho, f.s.gamma, f.s.tol_bisect});
  // Scaled up so that the constraint is active and bisection runs.
  const CVector v = 3.0 * f.x0.vector();
  for (auto _ : state) benchmark::DoNotOptimize(block.solve(v));
}
BENCHMARK(BM_QcqpSolve);

void BM_CommBlock(benchmark::State& state) {
  const auto& f = fixture();
  const CommBlock block(f.ch, f.sym, f.s.rho, f.s.gamma);
  for (auto _ : state) benchmark::DoNotOptimize(block.solve(f.x0.vector()));
}
BENCHMARK(BM_CommBlock);

void BM_InnerSolve(benchmark::State& state) {
  const auto& f = fixture();
  Scenario s = f.s;
  s.max_inner = static_cast<int>(state.range(0));
  s.eps_primal = s.eps_dual = 0.0;
  AdmmOptions opt;
  opt.record_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_waveform(f.x0, f.w, s, f.ch, f.sym, f.x0, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InnerSolve)->Arg(1)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_AlternatingOptimize(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(alternating_optimize(f.s, f.ch, f.sym));
}
BENCHMARK(BM_AlternatingOptimize)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();

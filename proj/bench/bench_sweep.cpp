#include <benchmark/benchmark.h>

#include <omp.h>

#include "esrtwin/sweep.hpp"

using namespace esrtwin;

namespace {

SignalChain bench_chain() {
  SignalChain c;
  c.lockin.time_constant = 2e-3;
  c.noise = {true, 1e-7};
  return c;
}

SweepPlan bench_plan(const SignalChain& c, std::size_t points) {
  const LensCalibration cal;
  const double ec = quantize_excitation(field_to_excitation(c.resonance_field(4.5e9) * 1e3, cal), cal);
  const double step = 0.0002;
  SweepPlan p;
  p.axis1 = {AxisKind::excitation, ec, ec + step * static_cast<double>(points - 1) + step / 2, step};
  p.dwell_time = 12e-3;
  p.drive_frequency = 4.5e9;
  return p;
}

void run(benchmark::State& state, Execution exec) {
  const SignalChain chain = bench_chain();
  const SweepPlan plan = bench_plan(chain, static_cast<std::size_t>(state.range(0)));
  const LensCalibration cal;
  if (exec == Execution::parallel) omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_field_sweep(plan, cal, chain, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FieldSweepSerialReference(benchmark::State& state) { run(state, Execution::serial_reference); }
void BM_FieldSweepOpenMP(benchmark::State& state) { run(state, Execution::parallel); }

}  // namespace

BENCHMARK(BM_FieldSweepSerialReference)->Args({64, 1})->ArgNames({"points", "threads"})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FieldSweepOpenMP)
    ->ArgsProduct({{64}, benchmark::CreateRange(1, 8, 2)})
    ->ArgNames({"points", "threads"})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

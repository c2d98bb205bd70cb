#include <benchmark/benchmark.h>

#include <sstream>

#include "collapse/pfn.hpp"
#include "collapse/solver.hpp"
#include "collapse/trace_io.hpp"

using namespace collapse;

namespace {

const Axis kAxis = canonicalize_axis(kPi / 4, kPi / 2);
const SpinState kState = SpinState::make(0.4, 0.0);

void BM_GridSolve(benchmark::State& st) {
  SolverConfig cfg;
  cfg.grid_n = static_cast<int>(st.range(0));
  cfg.method = SolverMethod::grid;
  for (auto _ : st) benchmark::DoNotOptimize(solve_collapse(kAxis, kState, cfg));
}
BENCHMARK(BM_GridSolve)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ClosedFormSolve(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(solve_collapse_closed_form(kAxis, kState));
}
BENCHMARK(BM_ClosedFormSolve);

void BM_TraceLevels(benchmark::State& st) {
  SolverConfig cfg;
  cfg.grid_n = static_cast<int>(st.range(0));
  const auto lv = constraint_levels(kAxis, kState);
  const double levels[] = {lv.p_same, lv.p_flip};
  for (auto _ : st) benchmark::DoNotOptimize(trace_level_sets(kState, levels, cfg));
}
BENCHMARK(BM_TraceLevels)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_TraceCsv(benchmark::State& st) {
  SolverConfig cfg;
  cfg.method = SolverMethod::grid;
  const auto sol = solve_collapse(kAxis, kState, cfg);
  for (auto _ : st) {
    std::ostringstream out;
    write_trace_csv(out, sol.curves);
    benchmark::DoNotOptimize(out.str());
  }
}
BENCHMARK(BM_TraceCsv)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& st) {
  const auto e = parse_expr("x|y", 0);
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        outcome_probability(e, Measure::sphere_area, ProbabilityMethod::monte_carlo, st.range(0), 1));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

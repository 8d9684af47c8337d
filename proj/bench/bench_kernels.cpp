// Serial vs OpenMP kernels: the law suite and the what-if sweep.

#include <benchmark/benchmark.h>

#include "budget/axioms.hpp"
#include "budget/dsl.hpp"
#include "budget/report.hpp"

namespace {

using namespace budget;

void BM_AxiomsSerial(benchmark::State& state) {
  SuiteOptions o;
  o.trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_axiom_suite_serial(o));
}

void BM_AxiomsParallel(benchmark::State& state) {
  SuiteOptions o;
  o.trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_axiom_suite(o));
}

struct SweepFixture {
  dsl::BudgetProgram program = dsl::parse(cli::read_file(BUDGET_DATA_DIR "/msc.bgt"), "msc.bgt");
  Tuplix term = dsl::elaborate(program, "J");
  Valuation base = cli::parse_bindings(cli::read_file(BUDGET_DATA_DIR "/scenario.bindings"));
  std::vector<Rational> values = cli::sweep_values(Rational(0), Rational(1), Rational::make(1, 200));
};

const SweepFixture& fixture() {
  static const SweepFixture f;
  return f;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(cli::sweep_serial(f.term, f.base, "k", f.values));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(cli::sweep(f.term, f.base, "k", f.values));
}

}  // namespace

BENCHMARK(BM_AxiomsSerial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AxiomsParallel)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

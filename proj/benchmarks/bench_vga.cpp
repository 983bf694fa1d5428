#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "vga/dataset.hpp"
#include "vga/four_phase.hpp"
#include "vga/models.hpp"
#include "vga/sbm.hpp"
#include "vga/simplex.hpp"

namespace {

const vga::Dataset& table1() {
  static const auto d = vga::load_csv(VGA_BENCH_DATA);
  return d;
}

vga::Dataset synthetic(std::size_t n, std::size_t m, std::size_t s) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> val(0.1, 100.0);
  std::vector<vga::IndexLabel> in, out;
  for (std::size_t i = 0; i < m; ++i) in.push_back({"x" + std::to_string(i + 1), ""});
  for (std::size_t r = 0; r < s; ++r) out.push_back({"y" + std::to_string(r + 1), ""});
  std::vector<vga::DmuRecord> rows;
  for (std::size_t j = 0; j < n; ++j) {
    vga::DmuRecord rec{"U" + std::to_string(j + 1), {}, {}};
    for (std::size_t i = 0; i < m; ++i) rec.inputs.push_back(val(rng));
    for (std::size_t r = 0; r < s; ++r) rec.outputs.push_back(val(rng));
    rows.push_back(std::move(rec));
  }
  return vga::Dataset(std::move(in), std::move(out), std::move(rows));
}

void BM_AssessPte(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vga::assess(table1(), "K", vga::ProgramKind::pte()));
}
BENCHMARK(BM_AssessPte);

void BM_AssessStea(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vga::assess(table1(), "K", vga::ProgramKind::stea(1.0)));
}
BENCHMARK(BM_AssessStea);

void BM_PhasesOneToThree(benchmark::State& state) {
  auto d = std::make_shared<const vga::Dataset>(table1());
  for (auto _ : state) benchmark::DoNotOptimize(vga::Phase4Session::start(d, "K"));
}
BENCHMARK(BM_PhasesOneToThree);

void BM_WhatIf(benchmark::State& state) {
  auto session = vga::Phase4Session::start(std::make_shared<const vga::Dataset>(table1()), "K");
  for (auto _ : state) {
    auto s = session;
    benchmark::DoNotOptimize(s.what_if(1.0));
  }
}
BENCHMARK(BM_WhatIf);

void BM_Sbm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vga::compare_sbm_vga(table1(), "K"));
}
BENCHMARK(BM_Sbm);

// Whole-dataset PTE sweep on random data of growing size.
void BM_AssessAllUnits(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = synthetic(n, 3, 3);
  for (auto _ : state) {
    for (const auto& u : d.dmus()) benchmark::DoNotOptimize(vga::assess(d, u.id, vga::ProgramKind::pte()));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssessAllUnits)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_SimplexSolve(benchmark::State& state) {
  const auto d = synthetic(static_cast<std::size_t>(state.range(0)), 3, 3);
  const auto prog = vga::build_tsp(d, "U1", vga::ProgramKind::stea(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(vga::lp::solve(prog));
}
BENCHMARK(BM_SimplexSolve)->Arg(16)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();

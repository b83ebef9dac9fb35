#include <benchmark/benchmark.h>

#include <random>

#include "imcheck/kernels/sampling.hpp"
#include "imcheck/symexpr/random.hpp"

using namespace imcheck;

namespace {

const std::vector<std::string> kVars = {"x1", "x2", "x3", "x4"};

struct Workload {
  std::vector<sym::CompiledExpr> lhs, rhs;
  std::vector<double> samples;

  explicit Workload(std::size_t count) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 64; ++k) {
      auto e = sym::random_polynomial(kVars, rng, {8, 4, 9});
      lhs.emplace_back(e, kVars);
      rhs.emplace_back(e, kVars);
    }
    samples = kernels::sample_box(kVars.size(), count, 11);
  }
};

template <auto Scan>
void scan_pairs(benchmark::State& state) {
  Workload w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Scan(w.lhs, w.rhs, w.samples, kVars.size(), 1e-9));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(w.lhs.size()));
}

template <auto Eval>
void evaluate_batch(benchmark::State& state) {
  Workload w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Eval(w.lhs.front(), w.samples, kVars.size()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(scan_pairs<kernels::scan_pairs_serial>)->Name("scan_pairs/serial")->Range(128, 1 << 14);
BENCHMARK(scan_pairs<kernels::scan_pairs_parallel>)->Name("scan_pairs/parallel")->Range(128, 1 << 14);
BENCHMARK(evaluate_batch<kernels::evaluate_batch_serial>)->Name("evaluate_batch/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(evaluate_batch<kernels::evaluate_batch_parallel>)->Name("evaluate_batch/parallel")->Range(1 << 10, 1 << 16);

BENCHMARK_MAIN();

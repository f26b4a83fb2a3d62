// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "watchlist/evaluate.hpp"
#include "watchlist/kernels.hpp"
#include "watchlist/rng.hpp"
#include "watchlist/synth.hpp"

using namespace watchlist;

namespace {

std::vector<double> random_scores(std::size_t n) {
  Rng rng(1);
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.uniform();
  return xs;
}

std::vector<double> centers(std::size_t bins) {
  std::vector<double> c(bins);
  for (std::size_t k = 0; k < bins; ++k) c[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(bins);
  return c;
}

void bin_mass(benchmark::State& state, Execution exec) {
  const auto xs = random_scores(static_cast<std::size_t>(state.range(0)));
  const auto cs = centers(100);
  std::vector<double> out(cs.size());
  for (auto _ : state) {
    kernels::gaussian_bin_mass(exec, xs, cs, 0.02, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}

void loo_folds(benchmark::State& state, Execution exec) {
  SynthConfig c;
  c.n_subjects = static_cast<std::size_t>(state.range(0));
  const auto out = generate(c);
  EvalConfig cfg;
  cfg.exec = exec;
  cfg.landscape.exec = exec;
  for (auto _ : state) {
    const auto r = loocv(out.scores, MetricId::Euclidean, ComparisonQuality::HQ, ComparisonKind::Genuine,
                         Classifier::MinRule, cfg);
    benchmark::DoNotOptimize(r.correct);
  }
}

}  // namespace

BENCHMARK_CAPTURE(bin_mass, serial, Execution::Serial)->Arg(1000)->Arg(100000)->Arg(1000000);
BENCHMARK_CAPTURE(bin_mass, parallel, Execution::Parallel)->Arg(1000)->Arg(100000)->Arg(1000000);
BENCHMARK_CAPTURE(loo_folds, serial, Execution::Serial)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(loo_folds, parallel, Execution::Parallel)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

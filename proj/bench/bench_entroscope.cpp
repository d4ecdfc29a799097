#include <benchmark/benchmark.h>
#include <omp.h>

#include <memory>

#include "entroscope/npd.hpp"
#include "entroscope/ppm.hpp"
#include "entroscope/ppm_reference.hpp"
#include "entroscope/predict.hpp"
#include "entroscope/sources.hpp"

using namespace entroscope;

namespace {

SymbolSequence markov_sample(std::size_t n) {
  return sources::SourceModel::parse("markov:rows=0.9,0.1;0.2,0.8").sample_symbols(n, 7);
}

void BM_MixtureIncremental(benchmark::State& state) {
  const auto seq = markov_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ppm::mixture_log_prob(seq));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MixtureIncremental)->RangeMultiplier(4)->Range(64, 1 << 16)->Complexity();

void BM_MixtureReference(benchmark::State& state) {
  const auto seq = markov_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ppm::reference::mixture_log_prob(seq, ppm::SmoothingRule::laplace(), ppm::WeightScheme::kRational));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MixtureReference)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_ConstantSourceCapped(benchmark::State& state) {
  const auto seq = sources::SourceModel::parse("periodic:0").sample_symbols(20000, 1);
  ppm::Options options;
  if (state.range(0) > 0) options.max_order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ppm::mixture_log_prob(seq, options));
}
BENCHMARK(BM_ConstantSourceCapped)->Arg(0)->Arg(16)->Unit(benchmark::kMillisecond);

// Second argument is the OpenMP thread count; 1 is the serial baseline.
void BM_NpdLevels(benchmark::State& state) {
  const auto xs = sources::SourceModel::gaussian_ar1(0.5).sample_reals(static_cast<std::size_t>(state.range(0)), 3);
  npd::NpdConfig config;
  config.reference = quantize::ReferenceMeasure::gaussian();
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(npd::npd_log_density(xs, config));
  omp_set_num_threads(omp_get_num_procs());
}
BENCHMARK(BM_NpdLevels)
    ->Args({10000, 1})
    ->ArgsProduct({{10000}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond);

void BM_CesaroPrediction(benchmark::State& state) {
  const auto seq = markov_sample(20000);
  const predict::CesaroMeasure measure(std::make_shared<ppm::PpmMixture>(seq.alphabet()),
                                       static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(predict::run_prediction(seq, measure).mistake_density());
}
BENCHMARK(BM_CesaroPrediction)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

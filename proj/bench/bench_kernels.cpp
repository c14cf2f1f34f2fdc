// Serial reference kernels against the OpenMP kernels on sampled families.

#include "varitool/families.hpp"
#include "varitool/fields.hpp"
#include "varitool/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace varitool;

namespace {

DiscreteVarifold disc_sample(double h) { return sample(AnalyticFamily::disc(2, 3, 1.0), h); }

MaximalParams maximal_params(double h) {
  MaximalParams p;
  p.sMin = 5.0 * h;
  p.sMax = 2.0;
  return p;
}

std::vector<Vec> atom_centers(const DiscreteVarifold& v) {
  std::vector<Vec> c;
  for (std::size_t i = 0; i < v.size(); ++i) c.push_back(v.position(i));
  return c;
}

double resolution(const benchmark::State& state) { return 1.0 / state.range(0); }

template <class Kernel>
void first_variation_bench(benchmark::State& state, Kernel kernel) {
  const auto v = disc_sample(resolution(state));
  const auto theta = radial_field(Vec::Zero(3), 0.2, 0.6, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(kernel(v, theta));
  state.counters["atoms"] = double(v.size());
}

template <class Kernel>
void maximal_bench(benchmark::State& state, Kernel kernel) {
  const double h = resolution(state);
  const auto v = disc_sample(h);
  const auto p = maximal_params(h);
  const auto centers = atom_centers(v);
  for (auto _ : state) benchmark::DoNotOptimize(kernel(v, centers, p));
  state.counters["atoms"] = double(v.size());
}

template <class Kernel>
void median_bench(benchmark::State& state, Kernel kernel) {
  const auto v = disc_sample(resolution(state));
  const auto f = radial_cap(Vec::Zero(3), 0.8);
  std::vector<double> values;
  for (std::size_t i = 0; i < v.size(); ++i) values.push_back(f.f(v.position(i)));
  const auto centers = atom_centers(v);
  const std::vector<double> radii(centers.size(), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(kernel(v, values, centers, radii, 0.5));
  state.counters["atoms"] = double(v.size());
}

void BM_FirstVariationSerial(benchmark::State& s) { first_variation_bench(s, kernels::serial::first_variation); }
void BM_FirstVariationOmp(benchmark::State& s) { first_variation_bench(s, kernels::omp::first_variation); }
void BM_MaximalSerial(benchmark::State& s) { maximal_bench(s, kernels::serial::maximal_at_atoms); }
void BM_MaximalOmp(benchmark::State& s) { maximal_bench(s, kernels::omp::maximal_at_atoms); }
void BM_MediansSerial(benchmark::State& s) { median_bench(s, kernels::serial::medians); }
void BM_MediansOmp(benchmark::State& s) { median_bench(s, kernels::omp::medians); }

}  // namespace

BENCHMARK(BM_FirstVariationSerial)->Arg(20)->Arg(40)->Arg(80);
BENCHMARK(BM_FirstVariationOmp)->Arg(20)->Arg(40)->Arg(80);
BENCHMARK(BM_MaximalSerial)->Arg(10)->Arg(20);
BENCHMARK(BM_MaximalOmp)->Arg(10)->Arg(20);
BENCHMARK(BM_MediansSerial)->Arg(10)->Arg(20);
BENCHMARK(BM_MediansOmp)->Arg(10)->Arg(20);

BENCHMARK_MAIN();

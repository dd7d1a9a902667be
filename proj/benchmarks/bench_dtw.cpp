#include <random>

#include <benchmark/benchmark.h>

#include "firerisk/clustering.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

void BM_Dtw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = noise(n, 1), b = noise(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(firerisk::dtw_distance(a, b));
}
BENCHMARK(BM_Dtw)->Arg(52)->Arg(365);

void BM_DtwBanded(benchmark::State& state) {
  const auto a = noise(365, 1), b = noise(365, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(firerisk::dtw_distance(a, b, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_DtwBanded)->Arg(10)->Arg(30);

void BM_ClusterDepartments(benchmark::State& state) {
  std::vector<firerisk::DepartmentSeries> s;
  for (int d = 0; d < state.range(0); ++d) s.push_back({"D" + std::to_string(d), noise(104, 10 + d)});
  firerisk::ClusterOptions opt;
  opt.k = 5;
  for (auto _ : state) benchmark::DoNotOptimize(firerisk::cluster_departments(s, opt));
}
BENCHMARK(BM_ClusterDepartments)->Arg(20)->Arg(90);

}  // namespace

#include <random>

#include <benchmark/benchmark.h>

#include "firerisk/fwi.hpp"
#include "firerisk/indices.hpp"

namespace {

// One FWI step over a raster of range(0) cells.
void BM_FwiRasterStep(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> t(cells), h(cells), w(cells), r(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    t[c] = 5 + 25 * u(rng);
    h[c] = 20 + 70 * u(rng);
    w[c] = 30 * u(rng);
    r[c] = u(rng) < 0.3 ? 10 * u(rng) : 0.0;
  }
  std::vector<double> o[7];
  for (auto& v : o) v.resize(cells);
  firerisk::fwi::FwiRaster raster(cells);
  for (auto _ : state) {
    raster.step(t, h, w, r, 7, o[0], o[1], o[2], o[3], o[4], o[5], o[6]);
    benchmark::DoNotOptimize(o[5].data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cells));
}
BENCHMARK(BM_FwiRasterStep)->Arg(1000)->Arg(10000);

void BM_PrecipFeatures(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(state.range(0)));
  for (auto& x : p) x = u(rng) < 0.3 ? 20 * u(rng) : 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(firerisk::precip_features(p, 1.0));
}
BENCHMARK(BM_PrecipFeatures)->Arg(365)->Arg(3650);

}  // namespace

#include <benchmark/benchmark.h>

#include <random>

#include "fundusmark/fundusmark.hpp"

namespace fm = fundusmark;

namespace {

fm::GrayImage noise(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  fm::GrayImage img(rows, cols);
  for (double& v : img.values()) v = u(rng);
  return img;
}

void BM_HaarForwardInverse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const fm::GrayImage img = noise(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(fm::idwt2_haar(fm::dwt2_haar(img)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_HaarForwardInverse)->Arg(128)->Arg(512)->Arg(1024);

void BM_Median(benchmark::State& state) {
  const fm::GrayImage img = noise(512, 512);
  const int window = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fm::median_filter(img, window));
}
BENCHMARK(BM_Median)->Arg(3)->Arg(22)->Unit(benchmark::kMillisecond);

void BM_Wiener(benchmark::State& state) {
  const fm::GrayImage img = noise(512, 512);
  for (auto _ : state) benchmark::DoNotOptimize(fm::wiener_filter(img, 7));
}
BENCHMARK(BM_Wiener)->Unit(benchmark::kMillisecond);

void BM_Harris(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const fm::GrayImage img = noise(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(fm::detect_corners(img));
}
BENCHMARK(BM_Harris)->Arg(256)->Arg(660)->Unit(benchmark::kMillisecond);

void BM_PnGenerate(benchmark::State& state) {
  const fm::SessionKey key = fm::SessionKey::parse("bench");
  const auto length = static_cast<std::size_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fm::pn_generate(key, i++, length));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(length));
}
BENCHMARK(BM_PnGenerate)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace

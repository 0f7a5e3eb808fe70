// Parallel kernels against their serial reference versions.
// Run with OMP_NUM_THREADS / THERMOPAN_THREADS to compare thread counts.

#include <random>

#include <benchmark/benchmark.h>

#include "thermopan/frequency.hpp"
#include "thermopan/metrics.hpp"
#include "thermopan/model/layers.hpp"
#include "thermopan/preprocess.hpp"
#include "thermopan/reference.hpp"

using namespace thermopan;

namespace {

ImageF32 noise(int size, int channels, std::uint64_t seed, float scale = 1.0f) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(0.0f, scale);
    ImageF32 img(size, size, channels);
    for (float& v : img.pixels()) v = u(rng);
    return img;
}

model::Tensor<double> tensor(std::vector<int> shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    model::Tensor<double> t(std::move(shape));
    for (double& v : t.values()) v = u(rng);
    return t;
}

void BM_blur_separable(benchmark::State& st) {
    const auto img = noise(static_cast<int>(st.range(0)), 3, 1);
    const auto k = frequency::gaussian_kernel({25, 12.0});
    for (auto _ : st) benchmark::DoNotOptimize(frequency::convolve(img, k));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(img.size()));
}

void BM_blur_direct(benchmark::State& st) {
    const auto img = noise(static_cast<int>(st.range(0)), 3, 1);
    const auto k = frequency::gaussian_kernel({25, 12.0});
    for (auto _ : st) benchmark::DoNotOptimize(reference::convolve_direct(img, k));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(img.size()));
}

void BM_conv_parallel(benchmark::State& st) {
    const int s = static_cast<int>(st.range(0));
    const auto x = tensor({4, 16, s, s}, 2);
    const auto w = tensor({16, 16, 3, 3}, 3);
    const auto b = tensor({16}, 4);
    for (auto _ : st) benchmark::DoNotOptimize(model::conv2d_forward<double>(x, w, b.values(), 1, 1));
}

void BM_conv_reference(benchmark::State& st) {
    const int s = static_cast<int>(st.range(0));
    const auto x = tensor({4, 16, s, s}, 2);
    const auto w = tensor({16, 16, 3, 3}, 3);
    const auto b = tensor({16}, 4);
    for (auto _ : st) benchmark::DoNotOptimize(reference::conv2d(x, w, b.values(), 1, 1));
}

void BM_ssim_parallel(benchmark::State& st) {
    const auto a = noise(static_cast<int>(st.range(0)), 3, 5);
    const auto b = noise(static_cast<int>(st.range(0)), 3, 6);
    for (auto _ : st) benchmark::DoNotOptimize(metrics::ssim(a, b));
}

void BM_ssim_reference(benchmark::State& st) {
    const auto a = noise(static_cast<int>(st.range(0)), 3, 5);
    const auto b = noise(static_cast<int>(st.range(0)), 3, 6);
    for (auto _ : st) benchmark::DoNotOptimize(reference::ssim(a, b));
}

void BM_despike_parallel(benchmark::State& st) {
    const auto f = ThermalFrame::raw(noise(static_cast<int>(st.range(0)), 1, 7, 65535.0f), 16);
    for (auto _ : st) benchmark::DoNotOptimize(preprocess::despike(f));
}

void BM_despike_reference(benchmark::State& st) {
    const auto f = ThermalFrame::raw(noise(static_cast<int>(st.range(0)), 1, 7, 65535.0f), 16);
    for (auto _ : st) benchmark::DoNotOptimize(reference::despike(f));
}

}  // namespace

BENCHMARK(BM_blur_separable)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_blur_direct)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_conv_parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_conv_reference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ssim_parallel)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ssim_reference)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_despike_parallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_despike_reference)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

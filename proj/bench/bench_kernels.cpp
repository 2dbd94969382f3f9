#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "renyi/kernels.hpp"

namespace {

namespace k = renyi::kernels;

std::vector<double> gaussian_samples(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -8.0 + 16.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        v[i] = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    }
    return v;
}

template <auto Fn>
void bm_log_sums(benchmark::State& state) {
    const auto f = gaussian_samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(f, 2.0, 0.0, -1.0, 1e-300));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void bm_convolve(benchmark::State& state) {
    const auto a = gaussian_samples(static_cast<std::size_t>(state.range(0)));
    std::vector<double> out(2 * a.size() - 1);
    for (auto _ : state) {
        Fn(a, a, out);
        benchmark::DoNotOptimize(out.data());
    }
}

double bowl(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * std::log(v);
    return s;
}

template <auto Fn>
void bm_simplex(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(Fn(3, static_cast<std::size_t>(state.range(0)), bowl));
}

} // namespace

BENCHMARK(bm_log_sums<k::serial::log_sums>)->Name("log_sums/serial")->Arg(1 << 13)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_log_sums<k::parallel::log_sums>)->Name("log_sums/parallel")->Arg(1 << 13)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_convolve<k::serial::convolve_direct>)->Name("convolve_direct/serial")->Arg(1 << 10)->Arg(1 << 12);
BENCHMARK(bm_convolve<k::parallel::convolve_direct>)->Name("convolve_direct/parallel")->Arg(1 << 10)->Arg(1 << 12);
BENCHMARK(bm_simplex<k::serial::simplex_grid_min>)->Name("simplex_grid_min/serial")->Arg(300)->Arg(1000);
BENCHMARK(bm_simplex<k::parallel::simplex_grid_min>)->Name("simplex_grid_min/parallel")->Arg(300)->Arg(1000);

BENCHMARK_MAIN();

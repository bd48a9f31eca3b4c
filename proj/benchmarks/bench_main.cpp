// Microbenchmarks for the evaluation hot paths: single-point transforms,
// grid-scale FFT transforms, and the 1-D approximation primitives.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "beurlab/approx.hpp"
#include "beurlab/fft_ops.hpp"
#include "beurlab/geometry.hpp"
#include "beurlab/grid.hpp"
#include "beurlab/operators.hpp"

namespace {

using namespace beurlab;

void BM_pv_disk(benchmark::State& state) {
    const Domain dom = Domain::disk({0.0, 0.0}, 1.0);
    const cplx z{0.3, 0.2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(t_char_pv(dom, {-2, 0}, z).value);
    }
}
BENCHMARK(BM_pv_disk)->Unit(benchmark::kMillisecond);

void BM_contour_disk(benchmark::State& state) {
    const Domain dom = Domain::disk({0.0, 0.0}, 1.0);
    const cplx z{0.3, 0.2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(t_char_contour(dom, {-2, 0}, z).value);
    }
}
BENCHMARK(BM_contour_disk)->Unit(benchmark::kMicrosecond);

void BM_contour_square(benchmark::State& state) {
    const Domain dom = Domain::square({0.0, 0.0}, 0.5);
    const cplx z{0.13, -0.21};
    for (auto _ : state) {
        benchmark::DoNotOptimize(t_char_contour(dom, {-3, 0}, z).value);
    }
}
BENCHMARK(BM_contour_square)->Unit(benchmark::kMicrosecond);

void BM_contour_graph(benchmark::State& state) {
    const Domain dom = Domain::poly_graph({0.0, 0.05, 0.1});
    const cplx z{0.2, 0.9};
    for (auto _ : state) {
        benchmark::DoNotOptimize(t_char_contour(dom, {-3, 0}, z).value);
    }
}
BENCHMARK(BM_contour_graph)->Unit(benchmark::kMillisecond);

void BM_fft_beurling(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    GridFunction g(Box{-2.0, -2.0, 2.0, 2.0}, n);
    g.fill([](cplx z) { return std::abs(z) < 1.0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0); });
    for (auto _ : state) {
        benchmark::DoNotOptimize(fft_beurling_free(g));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_fft_beurling)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_beta_coefficient(benchmark::State& state) {
    const auto f = [](double x) { return std::sin(3.0 * x) + 0.2 * x * x; };
    const Interval I{-0.25, 0.25};
    for (auto _ : state) {
        benchmark::DoNotOptimize(beta_coefficient(f, I, 2).beta);
    }
}
BENCHMARK(BM_beta_coefficient)->Unit(benchmark::kMicrosecond);

void BM_whitney_disk(benchmark::State& state) {
    const Domain dom = Domain::disk({0.0, 0.0}, 1.0);
    const Box box{-1.4, -1.4, 1.4, 1.4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_whitney(dom, 2.0, box.width() / 256.0, box).cubes.size());
    }
}
BENCHMARK(BM_whitney_disk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

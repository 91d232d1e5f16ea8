#include <benchmark/benchmark.h>

#include "fieldrec/eigen_sampler.hpp"
#include "fieldrec/filters.hpp"

namespace {

using namespace fieldrec;

RVector layout_for(int m, double beta) {
    RandomStream rng(7);
    return draw_layout(sensors_for(m, beta), rng).mean_positions;
}

void BM_FourierMatrix(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const RVector x = layout_for(m, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(fourier_matrix(x, m));
}
BENCHMARK(BM_FourierMatrix)->Arg(10)->Arg(40)->Arg(200);

void BM_GramDirect(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const FourierMatrix g = fourier_matrix(layout_for(m, 0.2), m);
    for (auto _ : state) benchmark::DoNotOptimize(g.gram());
}
BENCHMARK(BM_GramDirect)->Arg(10)->Arg(40)->Arg(200);

void BM_GramToeplitz(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const RVector x = layout_for(m, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(gram_from_positions(x, m));
}
BENCHMARK(BM_GramToeplitz)->Arg(10)->Arg(40)->Arg(200);

void BM_BuildFilter(benchmark::State& state) {
    const auto kind = static_cast<FilterKind>(state.range(0));
    const int m = 40;
    const RVector x = layout_for(m, 0.2);
    const FourierMatrix g = fourier_matrix(x, m);
    const ScenarioParams p{g.beta(), 0.5, 0.0};
    const CharMatrix c = char_matrix(m, 1e-4);
    const double gamma = gamma_param(m, p.alpha, c);
    for (auto _ : state) {
        switch (kind) {
            case FilterKind::Matched: benchmark::DoNotOptimize(build_mf(g, p)); break;
            case FilterKind::ZeroForcing: benchmark::DoNotOptimize(build_zf(g)); break;
            case FilterKind::Lmmse: benchmark::DoNotOptimize(build_lmmse(g, p.alpha)); break;
            case FilterKind::LmmseJitter: benchmark::DoNotOptimize(build_lmmse_jitter(g, p.alpha, c, gamma)); break;
            case FilterKind::Interp: benchmark::DoNotOptimize(build_interp(x, m)); break;
        }
    }
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_BuildFilter)->DenseRange(0, 4);

void BM_EigenSample(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_eigenvalues(0.2, m, 1, 3, 1));
}
BENCHMARK(BM_EigenSample)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

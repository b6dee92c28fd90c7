#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "ridgekit/decompose.hpp"
#include "ridgekit/ridge.hpp"
#include "ridgekit/tfa.hpp"

using namespace ridgekit;

namespace {

Signal harmonic_signal(std::size_t N, double fs) {
    std::vector<double> x(N);
    double phase = 0;
    for (std::size_t n = 0; n < N; ++n) {
        phase += (1.5 + 0.2 * std::sin(0.3 * n / fs)) / fs;
        const double p = 2 * std::numbers::pi * phase;
        x[n] = 0.3 * std::cos(p) + std::cos(2 * p) + 0.5 * std::cos(3 * p);
    }
    return Signal(std::move(x), fs);
}

TfrConfig bench_tfr() {
    TfrConfig tc;
    tc.dxi_hz = 0.1;
    tc.max_hz = 10;
    tc.nominal_hz = 1.5;
    return tc;
}

void BM_Stft(benchmark::State& st) {
    const Signal s = harmonic_signal(static_cast<std::size_t>(st.range(0)), 50);
    const TfrConfig tc = bench_tfr();
    const TfrOptions o = tc.options(s.fs);
    for (auto _ : st) benchmark::DoNotOptimize(stft(s, tc.window(s.fs), o.bins, o.max_bins));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Stft)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Sst2(benchmark::State& st) {
    const Signal s = harmonic_signal(static_cast<std::size_t>(st.range(0)), 50);
    const TfrConfig tc = bench_tfr();
    for (auto _ : st) benchmark::DoNotOptimize(sst2(s, tc.window(s.fs), tc.options(s.fs)));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Sst2)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_SingleRd(benchmark::State& st) {
    const Signal s = harmonic_signal(2000, 50);
    const TfrConfig tc = bench_tfr();
    const NormalizedTfr R = normalize_tfr(sst2(s, tc.window(s.fs), tc.options(s.fs)));
    for (auto _ : st) benchmark::DoNotOptimize(single_rd(R, 1.0));
}
BENCHMARK(BM_SingleRd)->Unit(benchmark::kMillisecond);

void BM_Mhrd(benchmark::State& st) {
    const Signal s = harmonic_signal(2000, 50);
    const TfrConfig tc = bench_tfr();
    const Tfr S = sst2(s, tc.window(s.fs), tc.options(s.fs));
    const NormalizedTfr R = normalize_tfr(S);
    const auto K = static_cast<std::size_t>(st.range(0));
    PenaltyConfig pen;
    for (std::size_t k = 0; k < K; ++k) pen.lambda.push_back(1.0 - 0.1 * k);
    const SegmentPlan plan = default_plan(S.rows(), S.dt, S.dxi);
    for (auto _ : st) benchmark::DoNotOptimize(mhrd(R, K, pen, 0.0625, plan));
}
BENCHMARK(BM_Mhrd)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

// Serial vs parallel timings for the two embarrassingly parallel kernels:
// the contour grid (independent cells) and the backtest sweep (independent
// windows). Build with -DCMAKE_BUILD_TYPE=Release; needs google-benchmark.
#include <benchmark/benchmark.h>

#include <fstream>

#include "shfit/backtest.hpp"
#include "shfit/data.hpp"

using namespace shfit;

namespace {

const ObservedSeries& belgium() {
    static ObservedSeries series = [] {
        std::ifstream in(std::string(SHFIT_DATA_DIR) + "/belgium_hosp.csv");
        return reconcile_flows(aggregate_national(parse_belgium_csv(in)), Schema::belgium);
    }();
    return series;
}

ContourOptions contour_options(Exec exec) {
    ContourOptions o;
    for (int i = 0; i < 41; ++i) o.beta_axis.push_back(1e-6 + i * (2e-5 - 1e-6) / 40);
    for (int i = 0; i < 41; ++i) o.s_axis.push_back(1e3 + i * (3e4 - 1e3) / 40);
    o.exec = exec;
    return o;
}

void bm_contour(benchmark::State& state, Exec exec) {
    const auto& series = belgium();
    Window w{20, 50};
    auto opts = contour_options(exec);
    for (auto _ : state) {
        auto grid = contour_grid(series, w, opts);
        benchmark::DoNotOptimize(grid.phi_star);
    }
}

void bm_sweep(benchmark::State& state, Exec exec) {
    const auto& series = belgium();
    SweepOptions opts;
    opts.window_length = 14;
    opts.stride = 1;
    opts.exec = exec;
    for (auto _ : state) {
        auto report = backtest_sweep(series, opts);
        benchmark::DoNotOptimize(report.records.size());
    }
}

}  // namespace

BENCHMARK_CAPTURE(bm_contour, serial, Exec::serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(bm_contour, parallel, Exec::parallel)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK_CAPTURE(bm_sweep, serial, Exec::serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(bm_sweep, parallel, Exec::parallel)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();

#include "jetgeom/report/report.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace jetgeom;

namespace {

const char* const kModels[] = {"flat", "sphere", "conformal", "nonconstant_h", "flat_polar", "mixed"};

ModelSpec load(int k) { return load_model_file(std::string(JETGEOM_MODELS_DIR) + "/" + kModels[k] + ".json"); }

void BM_Analyze(benchmark::State& state) {
    const ModelSpec m = load(static_cast<int>(state.range(0)));
    state.SetLabel(m.name);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(m));
}
BENCHMARK(BM_Analyze)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
    const ModelSpec m = load(static_cast<int>(state.range(0)));
    state.SetLabel(m.name);
    for (auto _ : state) benchmark::DoNotOptimize(verify_model(m));
}
BENCHMARK(BM_Verify)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_ReportJson(benchmark::State& state) {
    const ModelSpec m = load(4);
    const Geometry g = analyze(m);
    for (auto _ : state) benchmark::DoNotOptimize(geometry_report_json(m, g));
}
BENCHMARK(BM_ReportJson)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

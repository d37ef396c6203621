#include <benchmark/benchmark.h>

#include "aaglsd/detector.hpp"
#include "aaglsd/synthetic.hpp"

using namespace aaglsd;

namespace {

const GrayImage& scene_512() {
    static const GrayImage img = synth::make_scene(synth::SceneSpec{}, 1).image;
    return img;
}

void BM_Smooth(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_smooth(scene_512()));
}
BENCHMARK(BM_Smooth)->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& state) {
    const RealImage smooth = gaussian_smooth(scene_512());
    for (auto _ : state) benchmark::DoNotOptimize(compute_gradient(smooth, AnchorParams{}.T_mag));
}
BENCHMARK(BM_Gradient)->Unit(benchmark::kMillisecond);

void BM_Anchors(benchmark::State& state) {
    const GradientField f = compute_gradient(gaussian_smooth(scene_512()), AnchorParams{}.T_mag);
    for (auto _ : state) benchmark::DoNotOptimize(build_anchor_map(f, AnchorParams{}));
}
BENCHMARK(BM_Anchors)->Unit(benchmark::kMillisecond);

void BM_Linking(benchmark::State& state) {
    const GradientField f = compute_gradient(gaussian_smooth(scene_512()), AnchorParams{}.T_mag);
    const AnchorMap base = build_anchor_map(f, AnchorParams{});
    for (auto _ : state) {
        state.PauseTiming();
        AnchorMap m = base;  // linking marks groups
        state.ResumeTiming();
        benchmark::DoNotOptimize(detect_all(m, f, LinkParams{}));
    }
}
BENCHMARK(BM_Linking)->Unit(benchmark::kMillisecond);

void BM_Detect(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    synth::SceneSpec spec;
    spec.width = n;
    spec.height = n;
    spec.segments = n / 50;
    const GrayImage img = synth::make_scene(spec, 2).image;
    const Detector det;
    for (auto _ : state) benchmark::DoNotOptimize(det.detect(img));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Detect)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

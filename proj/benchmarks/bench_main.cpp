#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "orf/harness.hpp"
#include "orf/scenario_config.hpp"

namespace {

const orf::ScenarioConfig& scenario1() {
    static const orf::ScenarioConfig cfg = *orf::builtin_scenario("scenario1");
    return cfg;
}

void BM_ChirpSpectrum(benchmark::State& state) {
    const auto& cfg = scenario1();
    std::mt19937_64 rng(1);
    const orf::EchoTarget target{3.5, -20.0, 0.3};
    for (auto _ : state) {
        const auto samples = orf::synthesize_beat(cfg.model.radar, std::span(&target, 1), cfg.model.clutter, rng);
        benchmark::DoNotOptimize(orf::beat_spectrum(cfg.model.radar, samples, cfg.model.window));
    }
}
BENCHMARK(BM_ChirpSpectrum);

void BM_RenderFrame(benchmark::State& state) {
    const auto& cfg = scenario1();
    const auto sensor = cfg.sensor_at(0.0, 10.0);
    const auto mount = cfg.initial_mount().orientation();
    std::mt19937_64 rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(orf::render_frame(cfg.fusion.camera, mount, sensor, cfg.fusion.label,
                                                   {cfg.fusion.pixel_noise_sigma, &rng}, 0.0));
    }
}
BENCHMARK(BM_RenderFrame);

void BM_DetectLabel(benchmark::State& state) {
    const auto& cfg = scenario1();
    std::mt19937_64 rng(3);
    const auto frame = orf::render_frame(cfg.fusion.camera, cfg.initial_mount().orientation(), cfg.sensor_at(0.0, 0.0),
                                         cfg.fusion.label, {cfg.fusion.pixel_noise_sigma, &rng}, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(orf::detect_label(frame, cfg.fusion.thresholds, cfg.fusion.min_area_px));
    }
}
BENCHMARK(BM_DetectLabel);

void BM_ControlCycle(benchmark::State& state) {
    const auto& cfg = scenario1();
    const orf::FusionController controller(cfg.fusion, cfg.model, cfg.calibrate());
    const auto sensor = cfg.sensor_at(0.0, 0.0);
    orf::CycleRandom random{std::mt19937_64(4), std::mt19937_64(5)};
    for (auto _ : state) {
        orf::PanTiltState mount = cfg.initial_mount();
        benchmark::DoNotOptimize(controller.control_cycle(sensor, mount, 0.0, random));
    }
}
BENCHMARK(BM_ControlCycle)->Unit(benchmark::kMillisecond);

void BM_ScenarioLevel(benchmark::State& state) {
    const auto& cfg = scenario1();
    const orf::FusionController controller(cfg.fusion, cfg.model, cfg.calibrate());
    for (auto _ : state) benchmark::DoNotOptimize(orf::simulate_level(cfg, controller, 0));
}
BENCHMARK(BM_ScenarioLevel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <random>

#include "gwshm/augment.hpp"
#include "gwshm/autoencoder.hpp"
#include "gwshm/detector.hpp"
#include "gwshm/edge_model.hpp"
#include "gwshm/features.hpp"
#include "gwshm/rng.hpp"
#include "gwshm/signal_model.hpp"

using namespace gwshm;

namespace {

GwRecord make_noisy_record() {
    PropagationParams params;
    const ToneBurst burst = hanning_tone_burst(75e3, 5, 10e6);
    const GwRecord clean = normalize(propagate(burst, {"A", 180.0}, {50.0}, {}, params));
    return add_noise_at_snr(clean, {20.0, 0.5, 1}, 7);
}

AnomalyDetector make_detector() {
    AnomalyDetector d;
    d.model = build_model(1);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        d.scaler.min[i] = -2.0;
        d.scaler.max[i] = 2.0;
    }
    d.fit = {0.01, 0.005, 0.015};
    return d;
}

}  // namespace

static void BM_Propagate(benchmark::State& state) {
    PropagationParams params;
    const ToneBurst burst = hanning_tone_burst(75e3, 5, 10e6);
    for (auto _ : state)
        benchmark::DoNotOptimize(propagate(burst, {"A", 180.0}, {50.0}, {}, params));
}
BENCHMARK(BM_Propagate);

static void BM_AddNoiseAtSnr(benchmark::State& state) {
    PropagationParams params;
    const ToneBurst burst = hanning_tone_burst(75e3, 5, 10e6);
    const GwRecord clean = normalize(propagate(burst, {"A", 180.0}, {50.0}, {}, params));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(add_noise_at_snr(clean, {20.0, 0.5, 1}, ++seed));
}
BENCHMARK(BM_AddNoiseAtSnr);

static void BM_ExtractFeatures(benchmark::State& state) {
    const GwRecord record = make_noisy_record();
    const std::vector<double> window = crop_window(record);
    const BaselineReference baseline = make_baseline_reference(window);
    for (auto _ : state) benchmark::DoNotOptimize(extract_features(window, baseline));
}
BENCHMARK(BM_ExtractFeatures);

static void BM_TrainEpoch(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::vector<std::vector<double>> samples;
    for (int i = 0; i < 256; ++i) {
        auto s = gaussian_sequence(16, rng);
        for (double& v : s) v = std::tanh(v);
        samples.push_back(std::move(s));
    }
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 32;
    for (auto _ : state) {
        state.PauseTiming();
        DenseAutoencoder model = build_model(5);
        state.ResumeTiming();
        benchmark::DoNotOptimize(train(model, samples, cfg));
    }
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

static void BM_EdgeInfer(benchmark::State& state) {
    const EdgeModel model = load_edge_model(serialize(make_detector()));
    InferenceScratch scratch;
    const std::vector<double> raw(kFeatureCount, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(edge_infer(model, raw, scratch));
}
BENCHMARK(BM_EdgeInfer);

static void BM_SerializeLoad(benchmark::State& state) {
    const AnomalyDetector detector = make_detector();
    for (auto _ : state) benchmark::DoNotOptimize(load_edge_model(serialize(detector)));
}
BENCHMARK(BM_SerializeLoad);

BENCHMARK_MAIN();

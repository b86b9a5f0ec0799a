// Acceptance suite: one check per shipped guarantee, each printing a single
// [PASS]/[FAIL] line. Run with no arguments for all, or pass criterion
// numbers (1..9) to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "dataset_io.hpp"
#include "features_csv.hpp"
#include "gwshm/augment.hpp"
#include "gwshm/autoencoder.hpp"
#include "gwshm/detector.hpp"
#include "gwshm/edge_model.hpp"
#include "gwshm/errors.hpp"
#include "gwshm/features.hpp"
#include "gwshm/rng.hpp"
#include "gwshm/signal_model.hpp"
#include "oracles/feature_oracle.hpp"
#include "oracles/spectral_oracle.hpp"

using namespace gwshm;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& what) {
    if (!condition) throw CheckFailure(what);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("gwshm-acceptance-" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "gwshm");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    return cli::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// criterion 1: parameter accounting
std::string criterion_parameter_accounting() {
    const DenseAutoencoder model = build_model(1);
    require(model.parameter_count() == 9696, "total parameter count != 9696");
    const std::vector<std::size_t> expected = {272, 544, 2112, 0, 4160, 2080, 528};
    require(model.per_layer_parameter_counts() == expected, "per-layer counts mismatch");
    return "9696 parameters, layers 272/544/2112/0/4160/2080/528";
}

// criterion 2: feature identities against the brute-force reference
std::string criterion_feature_identities() {
    std::mt19937_64 rng(7);
    double worst_identity = 0.0;
    double worst_oracle = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 32 + static_cast<std::size_t>(uniform_below(rng, 512));
        std::vector<double> base = gaussian_sequence(n, rng);
        for (double& s : base) s += 0.05;
        std::vector<double> window = gaussian_sequence(n, rng);

        const FeatureVector f = extract_features(window, make_baseline_reference(base));

        const double identity1 =
            std::abs(f.rmsd * f.rmsd - f.damage_index) / std::max(f.damage_index, 1e-30);
        const double identity2 = std::abs(f.norm_energy_diff - (f.energy_ratio - 1.0)) /
                                 std::max(std::abs(f.energy_ratio - 1.0), 1e-30);
        worst_identity = std::max({worst_identity, identity1, identity2});

        const auto ref = oracle::reference_features(window, base).as_array();
        const auto got = f.as_array();
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            const double scale = std::max({std::abs(ref[i]), std::abs(got[i]), 1e-30});
            worst_oracle = std::max(worst_oracle, std::abs(got[i] - ref[i]) / scale);
        }
    }
    require(worst_identity < 1e-9, "cross-feature identity drift above 1e-9");
    require(worst_oracle < 1e-9, "feature value deviates from brute-force oracle above 1e-9");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "1000 pairs, worst identity %.2e, worst vs oracle %.2e",
                  worst_identity, worst_oracle);
    return buf;
}

// criterion 3: gradient correctness on fixture networks
std::string criterion_gradient_correctness() {
    const std::vector<std::vector<LayerSpec>> topologies = {
        {{8, true, Activation::ReLU}, {4, true, Activation::Linear}},
        {{8, true, Activation::ReLU}, {8, false, Activation::ReLU},
         {4, true, Activation::Linear}},
    };
    const double h = 1e-4;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        for (const auto& topology : topologies) {
            DenseAutoencoder model = build_custom_model(4, topology, seed);
            std::mt19937_64 rng(seed + 500);
            std::vector<std::vector<double>> batch;
            for (int i = 0; i < 3; ++i) {
                auto s = gaussian_sequence(4, rng);
                for (double& v : s) v = std::tanh(v);
                batch.push_back(std::move(s));
            }
            const auto loss = [&]() {
                double acc = 0.0;
                for (const auto& x : batch) acc += reconstruction_mse(x, forward(model, x));
                return acc / static_cast<double>(batch.size());
            };
            const ModelGradients analytic = loss_gradients(model, batch);
            const auto check_tensor = [&](std::vector<double>& params,
                                          const std::vector<double>& grads) {
                for (std::size_t p = 0; p < params.size(); ++p) {
                    const double original = params[p];
                    params[p] = original + h;
                    const double up = loss();
                    params[p] = original - h;
                    const double down = loss();
                    params[p] = original;
                    const double numeric = (up - down) / (2.0 * h);
                    const double scale = std::max({std::abs(numeric), std::abs(grads[p]), 1e-8});
                    worst = std::max(worst, std::abs(grads[p] - numeric) / scale);
                }
            };
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                if (!model.layers[l].trainable) continue;
                check_tensor(model.weights[l], analytic.weights[l]);
                check_tensor(model.biases[l], analytic.biases[l]);
            }
        }
    }
    require(worst < 1e-4, "analytic gradient deviates from finite differences above 1e-4");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "20 seeds x 2 topologies, worst relative error %.2e", worst);
    return buf;
}

// criterion 4: noise contract (SNR accuracy + pink spectrum slope)
std::string criterion_noise_contract() {
    PropagationParams params;
    const ToneBurst burst = hanning_tone_burst(75e3, 5, 10e6);
    const GwRecord clean = normalize(propagate(burst, {"A", 180.0}, {50.0}, {}, params));

    double worst_snr = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const GwRecord noisy = add_noise_at_snr(clean, {20.0, 0.5, 1}, seed);
        std::vector<double> noise(clean.samples.size());
        for (std::size_t i = 0; i < noise.size(); ++i)
            noise[i] = noisy.samples[i] - clean.samples[i];
        const double snr_db =
            10.0 * std::log10(mean_square(clean.samples) / mean_square(noise));
        worst_snr = std::max(worst_snr, std::abs(snr_db - 20.0));
    }
    require(worst_snr < 0.5, "realized SNR misses 20 dB by more than 0.5 dB");

    const auto pink = pink_noise(1 << 16, 1.0, 11);
    const double slope = oracle::loglog_slope(oracle::welch_psd(pink, 10e6), 1e3, 100e3);
    require(slope > -1.15 && slope < -0.85, "pink PSD slope outside [-1.15, -0.85]");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst |SNR-20| = %.3f dB, pink slope %.3f", worst_snr,
                  slope);
    return buf;
}

// criterion 5: reconstruction-error formula and threshold exactness
std::string criterion_error_and_threshold_exactness() {
    std::vector<double> x(16, 0.0);
    require(reconstruction_mse(x, x) == 0.0, "MSE of identical vectors is not zero");
    std::vector<double> y(16, 0.0);
    x[0] = 1.0;
    require(reconstruction_mse(x, y) == 1.0 / 16.0, "hand-computed MSE mismatch");

    std::mt19937_64 rng(23);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> errors = gaussian_sequence(64, rng);
        for (double& e : errors) e = e * e;
        const ThresholdFit fit = fit_threshold(errors);
        long double sum = 0;
        for (double e : errors) sum += e;
        const double mean = static_cast<double>(sum / 64.0L);
        long double sq = 0;
        for (double e : errors) sq += (e - mean) * (e - mean);
        const double std_dev = std::sqrt(static_cast<double>(sq / 64.0L));
        worst = std::max(worst, std::abs(fit.threshold - (mean + std_dev)));
    }
    require(worst <= 1e-12, "threshold deviates from mean + population std beyond 1e-12");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "Eq. MSE exact, threshold worst deviation %.1e", worst);
    return buf;
}

// ---------------------------------------------------------------------------
// shared pipeline driver for criteria 6, 7 and 9

struct PipelineFiles {
    fs::path features_csv;
    fs::path checkpoint_dir;
    fs::path report_json;
    fs::path image;
};

PipelineFiles run_pipeline(const fs::path& root, const std::string& config_json,
                           const std::string& train_json, std::uint64_t seed) {
    fs::create_directories(root);
    std::ofstream(root / "config.json") << config_json;
    std::ofstream(root / "train.json") << train_json;

    PipelineFiles files;
    files.features_csv = root / "feat" / "features.csv";
    files.checkpoint_dir = root / "ckpt";
    files.report_json = root / "report" / "report.json";
    files.image = root / "model.gwae";

    require(run({"synth", "--config", (root / "config.json").string(), "--out",
                 (root / "data").string(), "--augment", "--seed",
                 std::to_string(seed)}) == 0,
            "synth step failed");
    require(run({"features", "--dataset", (root / "data").string(), "--out",
                 (root / "feat").string()}) == 0,
            "features step failed");
    require(run({"train", "--features", files.features_csv.string(), "--out",
                 files.checkpoint_dir.string(), "--seed", std::to_string(seed), "--config",
                 (root / "train.json").string()}) == 0,
            "train step failed");
    require(run({"eval", "--model", files.checkpoint_dir.string(), "--features",
                 files.features_csv.string(), "--out", (root / "report").string()}) == 0,
            "eval step failed");
    require(run({"export", "--model", files.checkpoint_dir.string(), "--out",
                 files.image.string()}) == 0,
            "export step failed");
    return files;
}

const char* kExperimentalConfig = R"({
  "scenario": {
    "temperatures_c": [0,5,10,15,20,25,30,35,40,45,50,55,60,65,70,75,80,85,90],
    "paths": [
      {"path_id": "P1"}, {"path_id": "P2"}, {"path_id": "P3"},
      {"path_id": "P4"}, {"path_id": "P5"}, {"path_id": "P6"}
    ],
    "conditions": [
      {"condition": "baseline"},
      {"condition": "trf", "sizes_mm": [20]},
      {"condition": "lfa", "sizes_mm": [20]}
    ]
  },
  "noise": {"snr_db": 20, "pink_fraction": 0.5, "copies": 50},
  "seed": 42
})";

const char* kExperimentalTrain = R"({"learning_rate": 0.01, "batch_size": 32, "epochs": 200})";

nlohmann::json find_case(const nlohmann::json& report, const std::string& name) {
    for (const auto& c : report.at("cases"))
        if (c.at("name") == name) return c;
    throw CheckFailure("report has no case named " + name);
}

// criterion 6: experimental-style protocol reproduction
std::string criterion_experimental_protocol() {
    TempDir tmp("c6");
    const PipelineFiles files = run_pipeline(tmp.path, kExperimentalConfig, kExperimentalTrain, 42);

    const cli::DatasetManifest manifest = cli::load_manifest(tmp.path / "data");
    require(manifest.records.size() == 3 * (114 + 5700),
            "dataset does not hold 114 clean + 5700 augmented records per condition");

    nlohmann::json report;
    std::ifstream(files.report_json) >> report;
    const double baseline_acc = find_case(report, "test_baseline").at("accuracy_pct");
    const nlohmann::json trf = find_case(report, "trf_20mm");
    const nlohmann::json lfa = find_case(report, "lfa_20mm");

    require(baseline_acc >= 97.0, "held-out baseline accuracy below 97%");
    require(trf.at("accuracy_pct").get<double>() >= 90.0, "TRF accuracy below 90%");
    require(trf.at("f1_pct").get<double>() >= 80.0, "TRF F1 below 80%");
    require(lfa.at("accuracy_pct").get<double>() >= 90.0, "LFA accuracy below 90%");
    require(lfa.at("f1_pct").get<double>() >= 80.0, "LFA F1 below 80%");

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "baseline %.1f%% | TRF %.1f%%/F1 %.1f%% | LFA %.1f%%/F1 %.1f%%",
                  baseline_acc, trf.at("accuracy_pct").get<double>(),
                  trf.at("f1_pct").get<double>(), lfa.at("accuracy_pct").get<double>(),
                  lfa.at("f1_pct").get<double>());
    return buf;
}

// criterion 7: simulation-style size trend
std::string criterion_size_trend() {
    const char* config = R"({
  "scenario": {
    "temperatures_c": [30, 40, 50, 60, 70, 80, 90],
    "paths": [{"path_id": "S1"}, {"path_id": "S2"}, {"path_id": "S3"}],
    "conditions": [
      {"condition": "baseline"},
      {"condition": "trf", "sizes_mm": [5, 10, 15, 20]},
      {"condition": "lfa", "sizes_mm": [5, 10, 15, 20]}
    ]
  },
  "noise": {"snr_db": 20, "pink_fraction": 0.5, "copies": 50},
  "seed": 42
})";
    const char* train = R"({"learning_rate": 0.01, "batch_size": 28, "epochs": 400})";

    TempDir tmp("c7");
    const PipelineFiles files = run_pipeline(tmp.path, config, train, 42);

    const cli::DatasetManifest manifest = cli::load_manifest(tmp.path / "data");
    std::size_t baseline_noisy = 0;
    for (const auto& entry : manifest.records)
        if (entry.condition == ConditionLabel::Baseline && entry.noise_copy > 0)
            ++baseline_noisy;
    require(baseline_noisy == 1050, "simulation-style baseline pool is not 1050 records");

    nlohmann::json report;
    std::ifstream(files.report_json) >> report;

    std::ostringstream detail;
    for (const std::string kind : {"trf", "lfa"}) {
        double previous = -1.0;
        for (int size : {5, 10, 15, 20}) {
            const nlohmann::json c = find_case(report, kind + "_" + std::to_string(size) + "mm");
            const double median = c.at("errors").at("median");
            require(median > previous,
                    kind + " median error not strictly increasing at " +
                        std::to_string(size) + " mm");
            previous = median;
            if (size >= 10)
                require(c.at("accuracy_pct").get<double>() >= 85.0,
                        kind + " accuracy below 85% at " + std::to_string(size) + " mm");
        }
        const double acc10 = find_case(report, kind + "_10mm").at("accuracy_pct");
        const double acc20 = find_case(report, kind + "_20mm").at("accuracy_pct");
        detail << kind << " 10mm " << acc10 << "% 20mm " << acc20 << "% | ";
    }
    return detail.str() + "medians strictly increasing";
}

// criterion 8: edge parity, robustness and latency
std::string criterion_edge_parity_and_latency() {
    AnomalyDetector detector;
    detector.model = build_model(3);
    std::mt19937_64 rng(77);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        detector.scaler.min[i] = -1.5 - uniform_unit(rng);
        detector.scaler.max[i] = 1.5 + uniform_unit(rng);
    }
    detector.fit = {0.01, 0.004, 0.014};

    const std::vector<std::uint8_t> image = serialize(detector);
    const EdgeModel model = load_edge_model(image);
    require(serialize(model) == image, "round trip is not byte-identical");

    // parity over 1000 random raw vectors
    InferenceScratch scratch;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> raw = gaussian_sequence(kFeatureCount, rng);
        std::array<double, 16> arr{};
        std::copy(raw.begin(), raw.end(), arr.begin());
        const Classification train_side =
            classify(detector, apply_scaler(detector.scaler, FeatureVector::from_array(arr)));
        const EdgeInference edge_side = edge_infer(model, raw, scratch);
        worst = std::max(worst, std::abs(train_side.error - edge_side.error));
    }
    require(worst < 1e-5, "edge vs training error differs by 1e-5 or more");

    // 10^4 random corruptions must all fail cleanly
    int rejected = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<std::uint8_t> bad = image;
        switch (uniform_below(rng, 3)) {
            case 0: {
                const std::size_t pos = uniform_below(rng, bad.size());
                bad[pos] ^= static_cast<std::uint8_t>(1 + uniform_below(rng, 255));
                break;
            }
            case 1:
                bad.resize(uniform_below(rng, bad.size()));
                break;
            default: {
                const std::size_t extra = 1 + uniform_below(rng, 64);
                for (std::size_t i = 0; i < extra; ++i)
                    bad.push_back(static_cast<std::uint8_t>(uniform_below(rng, 256)));
            }
        }
        try {
            load_edge_model(bad);
        } catch (const EdgeImageError&) {
            ++rejected;
        }
    }
    require(rejected == 10000, "a corrupted image loaded or crashed");

    // latency: mean wall-clock of a single inference
    std::vector<double> raw(kFeatureCount, 0.3);
    double sink = 0.0;
    const auto start = std::chrono::steady_clock::now();
    constexpr int kRuns = 2000;
    for (int i = 0; i < kRuns; ++i) sink += edge_infer(model, raw, scratch).error;
    asm volatile("" : : "g"(&sink) : "memory");
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const double mean_us =
        std::chrono::duration<double, std::micro>(elapsed).count() / kRuns;
    (void)sink;
    require(mean_us < 1000.0, "single inference takes 1 ms or more");

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "parity %.2e, 10k corruptions rejected, %.1f us per inference", worst,
                  mean_us);
    return buf;
}

// criterion 9: end-to-end determinism
std::string criterion_determinism() {
    TempDir tmp("c9");
    const PipelineFiles a =
        run_pipeline(tmp.path / "run1", kExperimentalConfig, kExperimentalTrain, 42);
    const std::string features_a = slurp(a.features_csv);
    const std::string checkpoint_a = slurp(a.checkpoint_dir / "checkpoint.json");
    const std::string weights_a = slurp(a.checkpoint_dir / "detector.gwae");
    const std::string split_a = slurp(a.checkpoint_dir / "split.json");
    const std::string image_a = slurp(a.image);
    fs::remove_all(tmp.path / "run1");  // keep peak disk usage at one dataset

    const PipelineFiles b =
        run_pipeline(tmp.path / "run2", kExperimentalConfig, kExperimentalTrain, 42);
    require(features_a == slurp(b.features_csv), "features CSV differs between runs");
    require(checkpoint_a == slurp(b.checkpoint_dir / "checkpoint.json"),
            "checkpoint manifest differs between runs");
    require(weights_a == slurp(b.checkpoint_dir / "detector.gwae"),
            "weight payload differs between runs");
    require(split_a == slurp(b.checkpoint_dir / "split.json"), "split differs between runs");
    require(image_a == slurp(b.image), "exported image differs between runs");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "features CSV, checkpoint, weights and image byte-identical");
    return buf;
}

struct Criterion {
    int number;
    const char* title;
    std::function<std::string()> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "parameter accounting", criterion_parameter_accounting},
        {2, "feature identities vs brute-force oracle", criterion_feature_identities},
        {3, "gradient correctness", criterion_gradient_correctness},
        {4, "noise contract (SNR + pink slope)", criterion_noise_contract},
        {5, "error formula and threshold exactness", criterion_error_and_threshold_exactness},
        {6, "experimental-style protocol reproduction", criterion_experimental_protocol},
        {7, "simulation-style size trend", criterion_size_trend},
        {8, "edge parity, robustness and latency", criterion_edge_parity_and_latency},
        {9, "end-to-end determinism", criterion_determinism},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.number) == selected.end())
            continue;
        try {
            const std::string detail = criterion.check();
            std::printf("[PASS] criterion %d: %s — %s\n", criterion.number, criterion.title,
                        detail.c_str());
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion %d: %s — %s\n", criterion.number, criterion.title,
                        e.what());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}

#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "gwshm/augment.hpp"
#include "gwshm/autoencoder.hpp"
#include "gwshm/detector.hpp"
#include "gwshm/edge_model.hpp"
#include "gwshm/errors.hpp"
#include "gwshm/features.hpp"
#include "gwshm/rng.hpp"
#include "gwshm/signal_model.hpp"

#include "checkpoint.hpp"
#include "dataset_io.hpp"
#include "features_csv.hpp"
#include "report_io.hpp"
#include "scenario_config.hpp"

namespace gwshm::cli {

namespace {

// Seed streams for the independent pipeline stages.
constexpr std::uint64_t kStreamSplit = 0x511f7;
constexpr std::uint64_t kStreamTrain = 0x7247;
constexpr std::uint64_t kStreamModel = 0x30de1;
constexpr std::uint64_t kStreamSearch = 0x5e42c4;

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open: " + file.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void cmd_synth(const SynthOptions& options) {
    ScenarioRunConfig config = load_config_file(options.config_file);
    if (options.seed) config.seed = *options.seed;

    const std::filesystem::path records_dir = options.out_dir / "records";
    std::error_code ec;
    std::filesystem::create_directories(records_dir, ec);
    if (ec || !std::filesystem::is_directory(records_dir))
        throw IoError("cannot create output directory: " + records_dir.string());

    const std::vector<GwRecord> clean = generate_scenario(config.scenario, config.seed);

    DatasetManifest manifest;
    manifest.config = config;

    std::size_t written_noisy = 0;
    const auto write_one = [&](const GwRecord& record) {
        RecordEntry entry;
        entry.record_id = make_record_id(record);
        entry.file = "records/" + entry.record_id + ".gwrc";
        entry.path_id = record.path.path_id;
        entry.tx_rx_distance_mm = record.path.tx_rx_distance_mm;
        entry.temperature_c = record.env.temperature_c;
        entry.condition = record.condition_label;
        entry.size_mm = record.damage.size_mm;
        entry.noise_copy = record.noise_copy;
        write_record_file(options.out_dir / entry.file, record);
        manifest.records.push_back(std::move(entry));
    };

    // Clean records are stored normalized; noisy copies derive from them with
    // per-(record, copy) seeds, matching augment_dataset.
    for (std::size_t r = 0; r < clean.size(); ++r) {
        const GwRecord normalized = normalize(clean[r]);
        write_one(normalized);
        if (!options.augment) continue;
        for (int copy = 1; copy <= config.noise.copies; ++copy) {
            write_one(add_noise_at_snr(normalized, config.noise,
                                       derive_seed(config.seed, r, static_cast<std::uint64_t>(copy)),
                                       copy));
            ++written_noisy;
        }
    }

    std::sort(manifest.records.begin(), manifest.records.end(),
              [](const RecordEntry& a, const RecordEntry& b) { return a.record_id < b.record_id; });
    write_manifest(options.out_dir, manifest);

    std::cout << "synth: wrote " << clean.size() << " clean + " << written_noisy
              << " augmented records to " << options.out_dir.string() << '\n';
}

void cmd_features(const FeaturesOptions& options) {
    const DatasetManifest manifest = load_manifest(options.dataset_dir);
    const double t_ref = options.baseline_temperature_c.value_or(
        manifest.config.scenario.propagation.reference_temperature_c);

    // Per-path baseline reference: the clean baseline record at the reference
    // temperature, cropped to the analysis window.
    std::map<std::string, BaselineReference> baselines;
    for (const RecordEntry& entry : manifest.records) {
        if (entry.condition != ConditionLabel::Baseline || entry.noise_copy != 0) continue;
        if (entry.temperature_c != t_ref) continue;
        const GwRecord record = read_dataset_record(options.dataset_dir, manifest, entry);
        baselines.emplace(entry.path_id, make_baseline_reference(crop_window(record)));
    }

    std::vector<FeatureRow> rows;
    rows.reserve(manifest.records.size());
    for (const RecordEntry& entry : manifest.records) {
        const auto baseline = baselines.find(entry.path_id);
        if (baseline == baselines.end())
            throw MissingBaseline("path " + entry.path_id + " has no clean baseline record at " +
                                  std::to_string(t_ref) + " degC");
        const GwRecord record = read_dataset_record(options.dataset_dir, manifest, entry);

        FeatureRow row;
        row.record_id = entry.record_id;
        row.path_id = entry.path_id;
        row.temperature_c = entry.temperature_c;
        row.condition = entry.condition;
        row.size_mm = entry.size_mm;
        row.noise_copy = entry.noise_copy;
        row.features = extract_features(crop_window(record), baseline->second);
        rows.push_back(std::move(row));
    }

    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    const std::filesystem::path csv = options.out_dir / "features.csv";
    write_features_csv(csv, rows);
    std::cout << "features: wrote " << rows.size() << " rows to " << csv.string() << '\n';
}

namespace {

TrainConfig train_config_from_file(const std::optional<std::filesystem::path>& file,
                                   SearchSpace& space) {
    TrainConfig cfg;  // Table-3 optimum by default: lr 0.01, batch 32, 150 epochs
    if (!file) return cfg;

    std::ifstream in(*file);
    if (!in) throw IoError("cannot open train config: " + file->string());
    nlohmann::json doc;
    try {
        in >> doc;
        if (doc.contains("learning_rate")) cfg.learning_rate = doc.at("learning_rate").get<double>();
        if (doc.contains("batch_size")) cfg.batch_size = doc.at("batch_size").get<std::size_t>();
        if (doc.contains("epochs")) cfg.epochs = doc.at("epochs").get<std::size_t>();
        if (doc.contains("beta1")) cfg.beta1 = doc.at("beta1").get<double>();
        if (doc.contains("beta2")) cfg.beta2 = doc.at("beta2").get<double>();
        if (doc.contains("epsilon")) cfg.epsilon = doc.at("epsilon").get<double>();
        if (doc.contains("search")) {
            const auto& s = doc.at("search");
            if (s.contains("learning_rates"))
                space.learning_rates = s.at("learning_rates").get<std::vector<double>>();
            if (s.contains("batch_sizes"))
                space.batch_sizes = s.at("batch_sizes").get<std::vector<std::size_t>>();
            if (s.contains("epoch_counts"))
                space.epoch_counts = s.at("epoch_counts").get<std::vector<std::size_t>>();
            if (s.contains("iterations")) space.iterations = s.at("iterations").get<std::size_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed train config: " + std::string(e.what()));
    }
    return cfg;
}

}  // namespace

void cmd_train(const TrainOptions& options) {
    const std::vector<FeatureRow> rows = read_features_csv(options.features_csv);

    std::vector<const FeatureRow*> baseline_rows;
    for (const FeatureRow& row : rows)
        if (row.condition == ConditionLabel::Baseline) baseline_rows.push_back(&row);
    if (baseline_rows.empty())
        throw NoBaselineRows("training requires baseline-condition rows (unsupervised contract)");

    const SplitIndices split = split_indices(baseline_rows.size(), {0.50, 0.20, 0.30},
                                             derive_seed(options.seed, kStreamSplit));

    std::vector<FeatureVector> train_vectors;
    for (std::size_t i : split.train) train_vectors.push_back(baseline_rows[i]->features);
    const FeatureScaler scaler = fit_scaler(train_vectors);

    const auto scale_set = [&](const std::vector<std::size_t>& indices) {
        std::vector<std::vector<double>> out;
        out.reserve(indices.size());
        for (std::size_t i : indices) {
            const ScaledFeatures s = apply_scaler(scaler, baseline_rows[i]->features);
            out.emplace_back(s.begin(), s.end());
        }
        return out;
    };
    const std::vector<std::vector<double>> scaled_train = scale_set(split.train);
    const std::vector<std::vector<double>> scaled_val = scale_set(split.validation);

    SearchSpace space;
    TrainConfig cfg = train_config_from_file(options.config_file, space);
    cfg.seed = derive_seed(options.seed, kStreamTrain);

    Checkpoint checkpoint;
    if (options.tune) {
        const SearchResult search =
            random_search(space, scaled_train, derive_seed(options.seed, kStreamSearch));
        cfg.learning_rate = search.best.learning_rate;
        cfg.batch_size = search.best.batch_size;
        cfg.epochs = search.best.epochs;
        checkpoint.tune_trials = search.trials;
        std::cout << "train: random search chose lr=" << cfg.learning_rate
                  << " batch=" << cfg.batch_size << " epochs=" << cfg.epochs << " over "
                  << search.trials.size() << " trials\n";
    }

    DenseAutoencoder model = build_model(derive_seed(options.seed, kStreamModel));
    const TrainResult result = train(model, scaled_train, cfg);

    std::vector<double> train_errors;
    train_errors.reserve(scaled_train.size());
    for (const auto& sample : scaled_train)
        train_errors.push_back(reconstruction_mse(sample, forward(model, sample)));

    checkpoint.detector = AnomalyDetector{std::move(model), scaler, fit_threshold(train_errors)};
    checkpoint.train_config = cfg;
    checkpoint.loss_history = result.loss_history;
    checkpoint.validation_loss =
        scaled_val.empty() ? 0.0 : mean_reconstruction_mse(checkpoint.detector.model, scaled_val);
    checkpoint.seed = options.seed;
    for (std::size_t i : split.train) checkpoint.split.train.push_back(baseline_rows[i]->record_id);
    for (std::size_t i : split.validation)
        checkpoint.split.validation.push_back(baseline_rows[i]->record_id);
    for (std::size_t i : split.test) checkpoint.split.test.push_back(baseline_rows[i]->record_id);

    write_checkpoint(options.out_dir, checkpoint);
    std::cout << "train: " << scaled_train.size() << " training rows, final loss "
              << (checkpoint.loss_history.empty() ? 0.0 : checkpoint.loss_history.back())
              << ", threshold " << checkpoint.detector.fit.threshold << ", checkpoint in "
              << options.out_dir.string() << '\n';
}

void cmd_eval(const EvalOptions& options) {
    const Checkpoint checkpoint = load_checkpoint(options.checkpoint_dir);
    const std::vector<FeatureRow> rows = read_features_csv(options.features_csv);

    // Baseline rows seen during training or validation are excluded; the
    // held-out split and any rows from other datasets form the test pool.
    std::unordered_set<std::string> seen_in_training(checkpoint.split.train.begin(),
                                                     checkpoint.split.train.end());
    seen_in_training.insert(checkpoint.split.validation.begin(),
                            checkpoint.split.validation.end());

    std::vector<LabeledFeatures> test_set;
    for (const FeatureRow& row : rows) {
        if (row.condition == ConditionLabel::Baseline && seen_in_training.count(row.record_id))
            continue;
        test_set.push_back(to_labeled(row));
    }
    if (test_set.empty()) throw EmptyDataset("no evaluation rows after removing training rows");

    const EvalReport report = evaluate(checkpoint.detector, test_set);

    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    write_eval_report_json(options.out_dir / "report.json", report);
    if (options.write_errors_csv) write_errors_csv(options.out_dir / "errors.csv", report);
    if (options.write_svg) write_error_histogram_svg(options.out_dir / "histogram.svg", report);

    for (const CaseReport& c : report.cases) {
        std::cout << "eval: " << c.name << " n=" << c.n << " accuracy=" << c.accuracy_pct << "%";
        if (c.f1_pct) std::cout << " f1=" << *c.f1_pct << "%";
        std::cout << '\n';
    }
}

void cmd_export(const ExportOptions& options) {
    const std::vector<std::uint8_t> bytes =
        read_file_bytes(options.checkpoint_dir / "detector.gwae");
    load_edge_model(bytes);  // validate before re-emitting

    if (options.out_file.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(options.out_file.parent_path(), ec);
    }
    std::ofstream out(options.out_file, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + options.out_file.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + options.out_file.string());
    std::cout << "export: wrote " << options.out_file.string() << " (" << bytes.size()
              << " bytes)\n";
}

int cmd_infer(const InferOptions& options) {
    const EdgeModel model = load_edge_model(read_file_bytes(options.image_file));

    std::string record_id;
    FeatureVector features;
    if (!options.record_file.empty()) {
        if (options.baseline_file.empty())
            throw ConfigError("--record requires --baseline for the comparative features");
        const GwRecord record = read_record_file(options.record_file);
        const GwRecord baseline = read_record_file(options.baseline_file);
        const BaselineReference reference = make_baseline_reference(crop_window(baseline));
        features = extract_features(crop_window(record), reference);
        record_id = options.record_file.stem().string();
    } else if (!options.features_csv.empty()) {
        if (options.record_id.empty())
            throw ConfigError("--features requires --record-id to pick a row");
        const std::vector<FeatureRow> rows = read_features_csv(options.features_csv);
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const FeatureRow& row) {
            return row.record_id == options.record_id;
        });
        if (it == rows.end())
            throw ConfigError("record-id not present in the features CSV: " + options.record_id);
        features = it->features;
        record_id = it->record_id;
    } else {
        throw ConfigError("infer needs either --record/--baseline or --features/--record-id");
    }

    InferenceScratch scratch;
    const auto raw = features.as_array();
    const EdgeInference result = edge_infer(model, raw, scratch);

    char line[256];
    std::snprintf(line, sizeof(line), "%s, %.9g, %s", record_id.c_str(), result.error,
                  to_string(result.verdict));
    std::cout << line << '\n';
    return result.verdict == Verdict::Damaged ? 3 : 0;
}

}  // namespace gwshm::cli

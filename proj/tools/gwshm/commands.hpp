#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace gwshm::cli {

struct SynthOptions {
    std::filesystem::path config_file;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;  // overrides the config seed
    bool augment = false;
};

struct FeaturesOptions {
    std::filesystem::path dataset_dir;
    std::filesystem::path out_dir;
    std::optional<double> baseline_temperature_c;  // default: propagation reference
};

struct TrainOptions {
    std::filesystem::path features_csv;
    std::filesystem::path out_dir;
    std::optional<std::filesystem::path> config_file;  // hyperparameter overrides
    std::uint64_t seed = 0;
    bool tune = false;
};

struct EvalOptions {
    std::filesystem::path checkpoint_dir;
    std::filesystem::path features_csv;
    std::filesystem::path out_dir;
    bool write_errors_csv = false;
    bool write_svg = false;
};

struct ExportOptions {
    std::filesystem::path checkpoint_dir;
    std::filesystem::path out_file;
};

struct InferOptions {
    std::filesystem::path image_file;
    std::filesystem::path record_file;    // with baseline_file, or
    std::filesystem::path baseline_file;  //
    std::filesystem::path features_csv;   // with record_id
    std::string record_id;
};

void cmd_synth(const SynthOptions& options);
void cmd_features(const FeaturesOptions& options);
void cmd_train(const TrainOptions& options);
void cmd_eval(const EvalOptions& options);
void cmd_export(const ExportOptions& options);

// Returns 0 (healthy) or 3 (damaged).
int cmd_infer(const InferOptions& options);

// Full argv-level entry point: parses, dispatches, and maps errors to the
// exit-code scheme (0 ok/healthy, 2 config/IO, 3 damaged, 4 image errors).
int run_cli(int argc, const char* const* argv);

}  // namespace gwshm::cli

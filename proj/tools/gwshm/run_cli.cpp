#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gwshm/errors.hpp"

namespace gwshm::cli {

namespace {

// 0 ok/healthy, 2 config/IO, 3 damaged, 4 image errors.
constexpr int kExitConfigOrIo = 2;
constexpr int kExitImageError = 4;

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Guided-wave SHM toolkit: synthetic data, features, autoencoder "
                 "training and edge inference"};
    app.require_subcommand(1);

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic guided-wave dataset");
    synth_cmd->add_option("--config", synth.config_file, "Scenario config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    synth_cmd->add_option("--out", synth.out_dir, "Dataset output directory")->required();
    std::uint64_t synth_seed = 0;
    auto* synth_seed_opt =
        synth_cmd->add_option("--seed", synth_seed, "Override the config seed");
    synth_cmd->add_flag("--augment", synth.augment, "Also write noise-augmented copies");

    FeaturesOptions features;
    auto* features_cmd = app.add_subcommand("features", "Extract the 16-feature table");
    features_cmd->add_option("--dataset", features.dataset_dir, "Dataset directory (with manifest)")
        ->required();
    features_cmd->add_option("--out", features.out_dir, "Output directory for features.csv")
        ->required();
    double baseline_temp = 0.0;
    auto* baseline_temp_opt = features_cmd->add_option(
        "--baseline-temp", baseline_temp, "Baseline reference temperature [degC]");
    features_cmd->add_option("--config", "Unused for this command")->group("");
    features_cmd->add_option("--seed", "Unused for this command")->group("");

    TrainOptions train;
    auto* train_cmd = app.add_subcommand("train", "Train the autoencoder detector");
    train_cmd->add_option("--features", train.features_csv, "Features CSV")
        ->required()
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--out", train.out_dir, "Checkpoint output directory")->required();
    std::string train_config;
    auto* train_config_opt =
        train_cmd->add_option("--config", train_config, "Hyperparameter overrides JSON");
    train_cmd->add_option("--seed", train.seed, "Pipeline seed");
    train_cmd->add_flag("--tune", train.tune, "Random-search the hyperparameters first");

    EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a features CSV");
    eval_cmd->add_option("--model", eval.checkpoint_dir, "Checkpoint directory")->required();
    eval_cmd->add_option("--features", eval.features_csv, "Features CSV")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", eval.out_dir, "Report output directory")->required();
    eval_cmd->add_flag("--errors-csv", eval.write_errors_csv, "Also write per-record errors.csv");
    eval_cmd->add_flag("--svg", eval.write_svg, "Also write histogram.svg");
    eval_cmd->add_option("--config", "Unused for this command")->group("");
    eval_cmd->add_option("--seed", "Unused for this command")->group("");

    ExportOptions exp;
    auto* export_cmd = app.add_subcommand("export", "Write the deployable edge model image");
    export_cmd->add_option("--model", exp.checkpoint_dir, "Checkpoint directory")->required();
    export_cmd->add_option("--out", exp.out_file, "Output image file (.gwae)")->required();
    export_cmd->add_option("--config", "Unused for this command")->group("");
    export_cmd->add_option("--seed", "Unused for this command")->group("");

    InferOptions infer;
    auto* infer_cmd = app.add_subcommand("infer", "Single-shot inference against an image");
    infer_cmd->add_option("--model", infer.image_file, "Edge model image (.gwae)")->required();
    infer_cmd->add_option("--record", infer.record_file, "Record file (.gwrc)");
    infer_cmd->add_option("--baseline", infer.baseline_file, "Baseline record file (.gwrc)");
    infer_cmd->add_option("--features", infer.features_csv, "Features CSV to pick a row from");
    infer_cmd->add_option("--record-id", infer.record_id, "Row id within --features");
    infer_cmd->add_option("--config", "Unused for this command")->group("");
    infer_cmd->add_option("--seed", "Unused for this command")->group("");
    infer_cmd->add_option("--out", "Unused for this command")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfigOrIo;
    }

    try {
        if (synth_cmd->parsed()) {
            if (synth_seed_opt->count() > 0) synth.seed = synth_seed;
            cmd_synth(synth);
        } else if (features_cmd->parsed()) {
            if (baseline_temp_opt->count() > 0) features.baseline_temperature_c = baseline_temp;
            cmd_features(features);
        } else if (train_cmd->parsed()) {
            if (train_config_opt->count() > 0) train.config_file = train_config;
            cmd_train(train);
        } else if (eval_cmd->parsed()) {
            cmd_eval(eval);
        } else if (export_cmd->parsed()) {
            cmd_export(exp);
        } else if (infer_cmd->parsed()) {
            return cmd_infer(infer);
        }
    } catch (const EdgeImageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitImageError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigOrIo;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return kExitConfigOrIo;
    }
    return 0;
}

}  // namespace gwshm::cli

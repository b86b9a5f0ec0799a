#include "checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "gwshm/errors.hpp"

namespace gwshm::cli {

namespace {

void write_bytes(const std::filesystem::path& file, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + file.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + file.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open: " + file.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

nlohmann::json split_to_json(const SplitAssignment& split) {
    return {{"train", split.train}, {"validation", split.validation}, {"test", split.test}};
}

}  // namespace

DenseAutoencoder model_from_edge(const EdgeModel& edge) {
    DenseAutoencoder model;
    model.input_width = edge.layers.front().in_width;
    const float* payload = edge.payload.data();
    for (const EdgeLayer& layer : edge.layers) {
        model.layers.push_back({layer.out_width, layer.trainable, layer.activation});
        model.weights.emplace_back();
        model.biases.emplace_back();
        if (layer.trainable) {
            const std::size_t w_count = static_cast<std::size_t>(layer.in_width) * layer.out_width;
            model.weights.back().assign(payload, payload + w_count);
            payload += w_count;
            model.biases.back().assign(payload, payload + layer.out_width);
            payload += layer.out_width;
        }
    }
    return model;
}

void write_checkpoint(const std::filesystem::path& dir, const Checkpoint& checkpoint) {
    std::filesystem::create_directories(dir);

    write_bytes(dir / "detector.gwae", serialize(checkpoint.detector));

    nlohmann::json arch = nlohmann::json::array();
    for (const LayerSpec& layer : checkpoint.detector.model.layers)
        arch.push_back({{"width", layer.output_width},
                        {"trainable", layer.trainable},
                        {"activation", layer.activation == Activation::ReLU ? "relu" : "linear"}});

    nlohmann::json doc = {
        {"schema_version", 1},
        {"input_width", checkpoint.detector.model.input_width},
        {"architecture", std::move(arch)},
        {"scaler",
         {{"min", checkpoint.detector.scaler.min}, {"max", checkpoint.detector.scaler.max}}},
        {"train_config",
         {{"learning_rate", checkpoint.train_config.learning_rate},
          {"batch_size", checkpoint.train_config.batch_size},
          {"epochs", checkpoint.train_config.epochs},
          {"beta1", checkpoint.train_config.beta1},
          {"beta2", checkpoint.train_config.beta2},
          {"epsilon", checkpoint.train_config.epsilon},
          {"seed", checkpoint.train_config.seed}}},
        {"threshold",
         {{"mean", checkpoint.detector.fit.mean},
          {"std_dev", checkpoint.detector.fit.std_dev},
          {"value", checkpoint.detector.fit.threshold}}},
        {"loss_history", checkpoint.loss_history},
        {"validation_loss", checkpoint.validation_loss},
        {"seed", checkpoint.seed},
    };
    if (!checkpoint.tune_trials.empty()) {
        nlohmann::json trials = nlohmann::json::array();
        for (const SearchTrial& trial : checkpoint.tune_trials)
            trials.push_back({{"learning_rate", trial.config.learning_rate},
                              {"batch_size", trial.config.batch_size},
                              {"epochs", trial.config.epochs},
                              {"score", trial.score}});
        doc["tune_trials"] = std::move(trials);
    }

    std::ofstream json_out(dir / "checkpoint.json");
    if (!json_out) throw IoError("cannot write checkpoint.json in " + dir.string());
    json_out << doc.dump(2) << '\n';

    std::ofstream split_out(dir / "split.json");
    if (!split_out) throw IoError("cannot write split.json in " + dir.string());
    split_out << split_to_json(checkpoint.split).dump(2) << '\n';
    if (!json_out || !split_out) throw IoError("failed writing checkpoint in " + dir.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
    const EdgeModel edge = load_edge_model(read_bytes(dir / "detector.gwae"));

    nlohmann::json doc;
    {
        std::ifstream in(dir / "checkpoint.json");
        if (!in) throw IoError("cannot open checkpoint.json in " + dir.string());
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw IoError("checkpoint.json is not valid JSON: " + std::string(e.what()));
        }
    }

    Checkpoint checkpoint;
    try {
        checkpoint.detector.model = model_from_edge(edge);
        const auto& scaler = doc.at("scaler");
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            checkpoint.detector.scaler.min[i] = scaler.at("min").at(i).get<double>();
            checkpoint.detector.scaler.max[i] = scaler.at("max").at(i).get<double>();
        }
        const auto& fit = doc.at("threshold");
        checkpoint.detector.fit.mean = fit.at("mean").get<double>();
        checkpoint.detector.fit.std_dev = fit.at("std_dev").get<double>();
        checkpoint.detector.fit.threshold = fit.at("value").get<double>();

        const auto& cfg = doc.at("train_config");
        checkpoint.train_config.learning_rate = cfg.at("learning_rate").get<double>();
        checkpoint.train_config.batch_size = cfg.at("batch_size").get<std::size_t>();
        checkpoint.train_config.epochs = cfg.at("epochs").get<std::size_t>();
        checkpoint.train_config.beta1 = cfg.at("beta1").get<double>();
        checkpoint.train_config.beta2 = cfg.at("beta2").get<double>();
        checkpoint.train_config.epsilon = cfg.at("epsilon").get<double>();
        checkpoint.train_config.seed = cfg.at("seed").get<std::uint64_t>();

        checkpoint.loss_history = doc.at("loss_history").get<std::vector<double>>();
        checkpoint.validation_loss = doc.at("validation_loss").get<double>();
        checkpoint.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("checkpoint.json schema error: " + std::string(e.what()));
    }

    {
        std::ifstream in(dir / "split.json");
        if (!in) throw IoError("cannot open split.json in " + dir.string());
        nlohmann::json split;
        try {
            in >> split;
            checkpoint.split.train = split.at("train").get<std::vector<std::string>>();
            checkpoint.split.validation = split.at("validation").get<std::vector<std::string>>();
            checkpoint.split.test = split.at("test").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw IoError("split.json schema error: " + std::string(e.what()));
        }
    }
    return checkpoint;
}

}  // namespace gwshm::cli

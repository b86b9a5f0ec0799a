#pragma once

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "gwshm/autoencoder.hpp"
#include "gwshm/detector.hpp"
#include "gwshm/edge_model.hpp"

namespace gwshm::cli {

struct SplitAssignment {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;
};

// A trained detector on disk: checkpoint.json (architecture, scaler, train
// config, threshold fit, loss history), split.json, and detector.gwae whose
// payload is the weight storage (edge image format).
struct Checkpoint {
    AnomalyDetector detector;
    TrainConfig train_config;
    std::vector<double> loss_history;
    double validation_loss = 0.0;
    std::uint64_t seed = 0;
    SplitAssignment split;
    std::vector<SearchTrial> tune_trials;
};

void write_checkpoint(const std::filesystem::path& dir, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& dir);

// f32 image payload widened back to the training-side representation.
DenseAutoencoder model_from_edge(const EdgeModel& edge);

}  // namespace gwshm::cli

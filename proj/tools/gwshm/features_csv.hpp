#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gwshm/detector.hpp"
#include "gwshm/features.hpp"

namespace gwshm::cli {

// One features-table row: metadata plus the 16 features in canonical order.
struct FeatureRow {
    std::string record_id;
    std::string path_id;
    double temperature_c = 0.0;
    ConditionLabel condition = ConditionLabel::Baseline;
    double size_mm = 0.0;
    int noise_copy = 0;
    FeatureVector features;
};

void write_features_csv(const std::filesystem::path& file, const std::vector<FeatureRow>& rows);

// Strict schema: the header must match the canonical column list exactly,
// otherwise SchemaMismatch.
std::vector<FeatureRow> read_features_csv(const std::filesystem::path& file);

LabeledFeatures to_labeled(const FeatureRow& row);

}  // namespace gwshm::cli

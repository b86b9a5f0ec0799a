#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gwshm/augment.hpp"
#include "gwshm/signal_model.hpp"

namespace gwshm::cli {

// Per-record binary file: 16-byte header (magic "GWRC", version u16, sample
// count u32, sample rate u32 Hz, 2 reserved bytes) followed by 32-bit
// little-endian float samples. Metadata lives in the manifest.
void write_record_file(const std::filesystem::path& file, const GwRecord& record);
GwRecord read_record_file(const std::filesystem::path& file);

struct RecordEntry {
    std::string record_id;
    std::string file;  // relative to the dataset directory
    std::string path_id;
    double tx_rx_distance_mm = 180.0;
    double temperature_c = 0.0;
    ConditionLabel condition = ConditionLabel::Baseline;
    double size_mm = 0.0;
    int noise_copy = 0;
};

struct ScenarioRunConfig {
    Scenario scenario;
    NoiseSpec noise;
    std::uint64_t seed = 0;
};

struct DatasetManifest {
    int schema_version = 1;
    ScenarioRunConfig config;
    std::vector<RecordEntry> records;  // sorted by record_id
};

std::string make_record_id(const GwRecord& record);

void write_manifest(const std::filesystem::path& dataset_dir, const DatasetManifest& manifest);

// Loads manifest.json and verifies the index against the files on disk
// (every entry resolvable, on-disk record count equal to the index size).
DatasetManifest load_manifest(const std::filesystem::path& dataset_dir);

GwRecord read_dataset_record(const std::filesystem::path& dataset_dir,
                             const DatasetManifest& manifest, const RecordEntry& entry);

}  // namespace gwshm::cli

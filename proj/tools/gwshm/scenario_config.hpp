#pragma once

#include <filesystem>

#include <json.hpp>

#include "dataset_io.hpp"

namespace gwshm::cli {

// JSON schema (docs/file_formats.md): a single document with a required
// "scenario" object (temperatures_c, paths, conditions; optional excitation
// and propagation overrides), an optional "noise" object and optional "seed".
ScenarioRunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ScenarioRunConfig& config);

ScenarioRunConfig load_config_file(const std::filesystem::path& file);

}  // namespace gwshm::cli

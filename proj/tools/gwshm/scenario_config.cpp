#include "scenario_config.hpp"

#include <cmath>
#include <fstream>

#include "gwshm/errors.hpp"

namespace gwshm::cli {

namespace {

double get_number(const nlohmann::json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
    return obj.at(key).get<double>();
}

void validate_path_id(const std::string& id) {
    if (id.empty()) throw ConfigError("path_id must not be empty");
    for (char c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
            throw ConfigError("path_id '" + id + "' may only contain [A-Za-z0-9_-]");
}

}  // namespace

ScenarioRunConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    if (!doc.contains("scenario")) throw ConfigError("config is missing the scenario object");
    const nlohmann::json& sc = doc.at("scenario");

    ScenarioRunConfig config;
    Scenario& scenario = config.scenario;

    try {
        if (!sc.contains("temperatures_c") || !sc.at("temperatures_c").is_array() ||
            sc.at("temperatures_c").empty())
            throw ConfigError("scenario.temperatures_c must be a non-empty array");
        for (const auto& t : sc.at("temperatures_c"))
            scenario.temperatures_c.push_back(t.get<double>());

        if (!sc.contains("paths") || !sc.at("paths").is_array() || sc.at("paths").empty())
            throw ConfigError("scenario.paths must be a non-empty array");
        for (const auto& p : sc.at("paths")) {
            PathSpec path;
            path.path_id = p.at("path_id").get<std::string>();
            validate_path_id(path.path_id);
            path.tx_rx_distance_mm = get_number(p, "tx_rx_distance_mm", 180.0);
            if (!(path.tx_rx_distance_mm > 0.0))
                throw ConfigError("tx_rx_distance_mm must be positive");
            scenario.paths.push_back(std::move(path));
        }

        if (!sc.contains("conditions") || !sc.at("conditions").is_array() ||
            sc.at("conditions").empty())
            throw ConfigError("scenario.conditions must be a non-empty array");
        for (const auto& c : sc.at("conditions")) {
            ScenarioCondition condition;
            condition.label = condition_from_string(c.at("condition").get<std::string>());
            if (c.contains("sizes_mm"))
                for (const auto& s : c.at("sizes_mm"))
                    condition.sizes_mm.push_back(s.get<double>());
            if (condition.label != ConditionLabel::Baseline && condition.sizes_mm.empty())
                throw ConfigError("damaged conditions need a non-empty sizes_mm array");
            scenario.conditions.push_back(std::move(condition));
        }

        if (sc.contains("excitation")) {
            const nlohmann::json& ex = sc.at("excitation");
            scenario.excitation.center_frequency_hz =
                get_number(ex, "center_frequency_hz", scenario.excitation.center_frequency_hz);
            scenario.excitation.cycles = static_cast<int>(
                get_number(ex, "cycles", static_cast<double>(scenario.excitation.cycles)));
            scenario.excitation.sample_rate_hz =
                get_number(ex, "sample_rate_hz", scenario.excitation.sample_rate_hz);
            scenario.excitation.capture_samples = static_cast<std::size_t>(get_number(
                ex, "capture_samples", static_cast<double>(scenario.excitation.capture_samples)));
        }

        if (sc.contains("propagation")) {
            const nlohmann::json& pr = sc.at("propagation");
            PropagationParams& p = scenario.propagation;
            p.group_velocity_km_s = get_number(pr, "group_velocity_km_s", p.group_velocity_km_s);
            p.amp_loss_per_c = get_number(pr, "amp_loss_per_c", p.amp_loss_per_c);
            p.vel_shift_per_c = get_number(pr, "vel_shift_per_c", p.vel_shift_per_c);
            p.damage_amp_gain_per_mm =
                get_number(pr, "damage_amp_gain_per_mm", p.damage_amp_gain_per_mm);
            p.damage_vel_gain_per_mm =
                get_number(pr, "damage_vel_gain_per_mm", p.damage_vel_gain_per_mm);
            p.reference_temperature_c =
                get_number(pr, "reference_temperature_c", p.reference_temperature_c);
            p.secondary_mode_ratio = get_number(pr, "secondary_mode_ratio", p.secondary_mode_ratio);
        }

        if (doc.contains("noise")) {
            const nlohmann::json& no = doc.at("noise");
            if (no.contains("snr_db") && no.at("snr_db").is_null())
                config.noise.snr_db = std::numeric_limits<double>::infinity();
            else
                config.noise.snr_db = get_number(no, "snr_db", config.noise.snr_db);
            config.noise.pink_fraction = get_number(no, "pink_fraction", config.noise.pink_fraction);
            config.noise.copies =
                static_cast<int>(get_number(no, "copies", static_cast<double>(config.noise.copies)));
            if (config.noise.pink_fraction < 0.0 || config.noise.pink_fraction > 1.0)
                throw ConfigError("noise.pink_fraction must lie in [0, 1]");
            if (config.noise.copies < 1) throw ConfigError("noise.copies must be at least 1");
        }

        if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config: " + std::string(e.what()));
    }

    return config;
}

nlohmann::json config_to_json(const ScenarioRunConfig& config) {
    const Scenario& scenario = config.scenario;

    nlohmann::json paths = nlohmann::json::array();
    for (const PathSpec& p : scenario.paths)
        paths.push_back({{"path_id", p.path_id}, {"tx_rx_distance_mm", p.tx_rx_distance_mm}});

    nlohmann::json conditions = nlohmann::json::array();
    for (const ScenarioCondition& c : scenario.conditions) {
        nlohmann::json item = {{"condition", to_string(c.label)}};
        if (c.label != ConditionLabel::Baseline) item["sizes_mm"] = c.sizes_mm;
        conditions.push_back(std::move(item));
    }

    nlohmann::json noise = {{"pink_fraction", config.noise.pink_fraction},
                            {"copies", config.noise.copies}};
    if (std::isinf(config.noise.snr_db))
        noise["snr_db"] = nullptr;
    else
        noise["snr_db"] = config.noise.snr_db;

    return {{"scenario",
             {{"temperatures_c", scenario.temperatures_c},
              {"paths", std::move(paths)},
              {"conditions", std::move(conditions)},
              {"excitation",
               {{"center_frequency_hz", scenario.excitation.center_frequency_hz},
                {"cycles", scenario.excitation.cycles},
                {"sample_rate_hz", scenario.excitation.sample_rate_hz},
                {"capture_samples", scenario.excitation.capture_samples}}},
              {"propagation",
               {{"group_velocity_km_s", scenario.propagation.group_velocity_km_s},
                {"amp_loss_per_c", scenario.propagation.amp_loss_per_c},
                {"vel_shift_per_c", scenario.propagation.vel_shift_per_c},
                {"damage_amp_gain_per_mm", scenario.propagation.damage_amp_gain_per_mm},
                {"damage_vel_gain_per_mm", scenario.propagation.damage_vel_gain_per_mm},
                {"reference_temperature_c", scenario.propagation.reference_temperature_c},
                {"secondary_mode_ratio", scenario.propagation.secondary_mode_ratio}}}}},
            {"noise", std::move(noise)},
            {"seed", config.seed}};
}

ScenarioRunConfig load_config_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config file: " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return config_from_json(doc);
}

}  // namespace gwshm::cli

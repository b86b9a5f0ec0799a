#include "dataset_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "gwshm/errors.hpp"
#include "scenario_config.hpp"

#include <json.hpp>

namespace gwshm::cli {

namespace {

constexpr char kRecordMagic[4] = {'G', 'W', 'R', 'C'};
constexpr std::uint16_t kRecordVersion = 1;

std::string format_number(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

}  // namespace

void write_record_file(const std::filesystem::path& file, const GwRecord& record) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open record file for writing: " + file.string());

    std::uint8_t header[16] = {};
    std::memcpy(header, kRecordMagic, 4);
    const std::uint16_t version = kRecordVersion;
    const auto count = static_cast<std::uint32_t>(record.samples.size());
    const auto rate = static_cast<std::uint32_t>(std::llround(record.sample_rate_hz));
    std::memcpy(header + 4, &version, 2);
    std::memcpy(header + 6, &count, 4);
    std::memcpy(header + 10, &rate, 4);
    out.write(reinterpret_cast<const char*>(header), sizeof(header));

    std::vector<float> samples(record.samples.begin(), record.samples.end());
    out.write(reinterpret_cast<const char*>(samples.data()),
              static_cast<std::streamsize>(samples.size() * sizeof(float)));
    if (!out) throw IoError("failed writing record file: " + file.string());
}

GwRecord read_record_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open record file: " + file.string());

    std::uint8_t header[16];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || std::memcmp(header, kRecordMagic, 4) != 0)
        throw IoError("not a GWRC record file: " + file.string());

    std::uint16_t version;
    std::uint32_t count;
    std::uint32_t rate;
    std::memcpy(&version, header + 4, 2);
    std::memcpy(&count, header + 6, 4);
    std::memcpy(&rate, header + 10, 4);
    if (version != kRecordVersion)
        throw IoError("unsupported GWRC version in " + file.string());

    std::vector<float> samples(count);
    in.read(reinterpret_cast<char*>(samples.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (!in) throw IoError("record file truncated: " + file.string());

    GwRecord record;
    record.samples.assign(samples.begin(), samples.end());
    record.sample_rate_hz = static_cast<double>(rate);
    return record;
}

std::string make_record_id(const GwRecord& record) {
    const char* tag = record.condition_label == ConditionLabel::Trf   ? "trf"
                      : record.condition_label == ConditionLabel::Lfa ? "lfa"
                                                                      : "base";
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%s_T%s_%s%s_n%02d", record.path.path_id.c_str(),
                  format_number(record.env.temperature_c).c_str(), tag,
                  format_number(record.damage.size_mm).c_str(), record.noise_copy);
    return buf;
}

void write_manifest(const std::filesystem::path& dataset_dir, const DatasetManifest& manifest) {
    nlohmann::json doc;
    doc["schema_version"] = manifest.schema_version;
    doc["config"] = config_to_json(manifest.config);

    nlohmann::json records = nlohmann::json::array();
    for (const RecordEntry& entry : manifest.records) {
        records.push_back({{"record_id", entry.record_id},
                           {"file", entry.file},
                           {"path_id", entry.path_id},
                           {"tx_rx_distance_mm", entry.tx_rx_distance_mm},
                           {"temperature_c", entry.temperature_c},
                           {"condition", to_string(entry.condition)},
                           {"size_mm", entry.size_mm},
                           {"noise_copy", entry.noise_copy}});
    }
    doc["records"] = std::move(records);

    std::ofstream out(dataset_dir / "manifest.json");
    if (!out) throw IoError("cannot write manifest in " + dataset_dir.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing manifest in " + dataset_dir.string());
}

DatasetManifest load_manifest(const std::filesystem::path& dataset_dir) {
    const std::filesystem::path file = dataset_dir / "manifest.json";
    std::ifstream in(file);
    if (!in) throw IoError("cannot open manifest: " + file.string());

    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest is not valid JSON: " + std::string(e.what()));
    }

    DatasetManifest manifest;
    try {
        manifest.schema_version = doc.at("schema_version").get<int>();
        manifest.config = config_from_json(doc.at("config"));
        for (const auto& item : doc.at("records")) {
            RecordEntry entry;
            entry.record_id = item.at("record_id").get<std::string>();
            entry.file = item.at("file").get<std::string>();
            entry.path_id = item.at("path_id").get<std::string>();
            entry.tx_rx_distance_mm = item.at("tx_rx_distance_mm").get<double>();
            entry.temperature_c = item.at("temperature_c").get<double>();
            entry.condition = condition_from_string(item.at("condition").get<std::string>());
            entry.size_mm = item.at("size_mm").get<double>();
            entry.noise_copy = item.at("noise_copy").get<int>();
            manifest.records.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest schema error: " + std::string(e.what()));
    }

    // Manifest integrity: the index must match the files on disk.
    std::size_t on_disk = 0;
    const std::filesystem::path records_dir = dataset_dir / "records";
    if (std::filesystem::is_directory(records_dir))
        for (const auto& entry : std::filesystem::directory_iterator(records_dir))
            if (entry.path().extension() == ".gwrc") ++on_disk;
    if (on_disk != manifest.records.size())
        throw IoError("manifest lists " + std::to_string(manifest.records.size()) +
                      " records but " + std::to_string(on_disk) + " exist on disk");
    for (const RecordEntry& entry : manifest.records)
        if (!std::filesystem::is_regular_file(dataset_dir / entry.file))
            throw IoError("manifest entry missing on disk: " + entry.file);

    return manifest;
}

GwRecord read_dataset_record(const std::filesystem::path& dataset_dir,
                             const DatasetManifest& /*manifest*/, const RecordEntry& entry) {
    GwRecord record = read_record_file(dataset_dir / entry.file);
    record.path.path_id = entry.path_id;
    record.path.tx_rx_distance_mm = entry.tx_rx_distance_mm;
    record.env.temperature_c = entry.temperature_c;
    record.condition_label = entry.condition;
    record.damage.kind = damage_kind_for(entry.condition);
    record.damage.size_mm = entry.size_mm;
    record.noise_copy = entry.noise_copy;
    return record;
}

}  // namespace gwshm::cli

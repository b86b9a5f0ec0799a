#include "features_csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gwshm/errors.hpp"

namespace gwshm::cli {

namespace {

std::string header_line() {
    std::string header = "record_id,path_id,temperature_c,condition,size_mm,noise_copy";
    for (const auto& name : feature_names()) {
        header += ',';
        header += name;
    }
    return header;
}

std::string format_value(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw SchemaMismatch("cannot parse number '" + text + "' in " + context);
    }
}

}  // namespace

void write_features_csv(const std::filesystem::path& file, const std::vector<FeatureRow>& rows) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open features CSV for writing: " + file.string());

    out << header_line() << '\n';
    for (const FeatureRow& row : rows) {
        out << row.record_id << ',' << row.path_id << ',' << format_value(row.temperature_c)
            << ',' << to_string(row.condition) << ',' << format_value(row.size_mm) << ','
            << row.noise_copy;
        for (double v : row.features.as_array()) out << ',' << format_value(v);
        out << '\n';
    }
    if (!out) throw IoError("failed writing features CSV: " + file.string());
}

std::vector<FeatureRow> read_features_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open features CSV: " + file.string());

    std::string line;
    if (!std::getline(in, line)) throw SchemaMismatch("features CSV is empty");
    if (line == header_line() + "\r") line.pop_back();
    if (line != header_line())
        throw SchemaMismatch("features CSV header does not match the canonical column order");

    std::vector<FeatureRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != 6 + kFeatureCount)
            throw SchemaMismatch("line " + std::to_string(line_no) + " has " +
                                 std::to_string(fields.size()) + " columns, expected " +
                                 std::to_string(6 + kFeatureCount));

        const std::string context = "line " + std::to_string(line_no);
        FeatureRow row;
        row.record_id = fields[0];
        row.path_id = fields[1];
        row.temperature_c = parse_double(fields[2], context);
        try {
            row.condition = condition_from_string(fields[3]);
        } catch (const Error&) {
            throw SchemaMismatch("unknown condition '" + fields[3] + "' in " + context);
        }
        row.size_mm = parse_double(fields[4], context);
        row.noise_copy = static_cast<int>(parse_double(fields[5], context));

        std::array<double, kFeatureCount> values{};
        for (std::size_t i = 0; i < kFeatureCount; ++i)
            values[i] = parse_double(fields[6 + i], context);
        row.features = FeatureVector::from_array(values);
        rows.push_back(std::move(row));
    }
    return rows;
}

LabeledFeatures to_labeled(const FeatureRow& row) {
    return {row.record_id, row.features, row.condition, row.size_mm};
}

}  // namespace gwshm::cli

#pragma once

#include <filesystem>

#include "gwshm/detector.hpp"

namespace gwshm::cli {

void write_eval_report_json(const std::filesystem::path& file, const EvalReport& report);

// (record_id, condition, error, prediction) per evaluated record.
void write_errors_csv(const std::filesystem::path& file, const EvalReport& report);

// Fig. 5-style overlaid per-condition histograms of reconstruction error,
// with the decision threshold marked.
void write_error_histogram_svg(const std::filesystem::path& file, const EvalReport& report);

}  // namespace gwshm::cli

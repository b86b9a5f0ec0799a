#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gwshm/signal_model.hpp"

namespace gwshm {

inline constexpr std::size_t kFeatureCount = 16;
inline constexpr double kDefaultWindowSeconds = 200e-6;

// The 16 time-domain features, in the fixed order that doubles as the
// network input contract and the CSV column order.
struct FeatureVector {
    double mean = 0.0;
    double median = 0.0;
    double mad = 0.0;
    double variance = 0.0;
    double std_dev = 0.0;
    double rms = 0.0;
    double rmsd = 0.0;
    double kurtosis = 0.0;
    double skew = 0.0;
    double crest_factor = 0.0;
    double impulse_factor = 0.0;
    double shape_factor = 0.0;
    double peak_to_peak_diff = 0.0;
    double energy_ratio = 0.0;
    double damage_index = 0.0;
    double norm_energy_diff = 0.0;

    std::array<double, kFeatureCount> as_array() const;
    static FeatureVector from_array(const std::array<double, kFeatureCount>& values);
};

const std::array<std::string_view, kFeatureCount>& feature_names();

// Reference window of the healthy structure at the reference temperature,
// with its peak-to-peak amplitude and energy (sum of squared samples).
struct BaselineReference {
    std::vector<double> samples;
    double peak_to_peak = 0.0;
    double energy = 0.0;
};

BaselineReference make_baseline_reference(std::span<const double> window);

// First round(duration * sample_rate) samples of the record.
std::vector<double> crop_window(const GwRecord& record, double duration_s = kDefaultWindowSeconds);

FeatureVector extract_features(std::span<const double> window, const BaselineReference& baseline);

// Affine per-feature map learned from training vectors: the training span of
// each feature maps onto [-1, 1]; constant features map to 0. Values outside
// the training span extrapolate without clipping.
struct FeatureScaler {
    std::array<double, kFeatureCount> min{};
    std::array<double, kFeatureCount> max{};
};

using ScaledFeatures = std::array<double, kFeatureCount>;

FeatureScaler fit_scaler(std::span<const FeatureVector> training_vectors);
ScaledFeatures apply_scaler(const FeatureScaler& scaler, const FeatureVector& vector);

}  // namespace gwshm

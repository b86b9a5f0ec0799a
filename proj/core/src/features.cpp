#include "gwshm/features.hpp"

#include <algorithm>
#include <cmath>

#include "gwshm/errors.hpp"

namespace gwshm {

std::array<double, kFeatureCount> FeatureVector::as_array() const {
    return {mean,         median,         mad,          variance,
            std_dev,      rms,            rmsd,         kurtosis,
            skew,         crest_factor,   impulse_factor, shape_factor,
            peak_to_peak_diff, energy_ratio, damage_index, norm_energy_diff};
}

FeatureVector FeatureVector::from_array(const std::array<double, kFeatureCount>& values) {
    FeatureVector f;
    f.mean = values[0];
    f.median = values[1];
    f.mad = values[2];
    f.variance = values[3];
    f.std_dev = values[4];
    f.rms = values[5];
    f.rmsd = values[6];
    f.kurtosis = values[7];
    f.skew = values[8];
    f.crest_factor = values[9];
    f.impulse_factor = values[10];
    f.shape_factor = values[11];
    f.peak_to_peak_diff = values[12];
    f.energy_ratio = values[13];
    f.damage_index = values[14];
    f.norm_energy_diff = values[15];
    return f;
}

const std::array<std::string_view, kFeatureCount>& feature_names() {
    static const std::array<std::string_view, kFeatureCount> names = {
        "mean",          "median",         "mad",           "variance",
        "std_dev",       "rms",            "rmsd",          "kurtosis",
        "skew",          "crest_factor",   "impulse_factor", "shape_factor",
        "peak_to_peak_diff", "energy_ratio", "damage_index", "norm_energy_diff"};
    return names;
}

BaselineReference make_baseline_reference(std::span<const double> window) {
    if (window.empty()) throw InvalidArgument("baseline window is empty");

    BaselineReference ref;
    ref.samples.assign(window.begin(), window.end());
    const auto [lo, hi] = std::minmax_element(ref.samples.begin(), ref.samples.end());
    ref.peak_to_peak = *hi - *lo;
    for (double s : ref.samples) ref.energy += s * s;
    if (ref.energy == 0.0) throw DegenerateInput("baseline window has zero energy");
    return ref;
}

std::vector<double> crop_window(const GwRecord& record, double duration_s) {
    const auto n = static_cast<long long>(std::llround(duration_s * record.sample_rate_hz));
    if (n < 1) throw InvalidArgument("crop window spans no samples");
    if (static_cast<std::size_t>(n) > record.samples.size())
        throw InvalidArgument("record is shorter than the analysis window");
    return {record.samples.begin(), record.samples.begin() + n};
}

namespace {

double median_of_sorted(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

}  // namespace

FeatureVector extract_features(std::span<const double> window, const BaselineReference& baseline) {
    const std::size_t n = window.size();
    if (n == 0) throw InvalidArgument("feature window is empty");
    if (n != baseline.samples.size())
        throw DimensionMismatch("window and baseline cover different durations");
    if (baseline.energy <= 0.0) throw DegenerateInput("baseline energy must be positive");

    const double inv_n = 1.0 / static_cast<double>(n);

    double sum = 0.0;
    for (double s : window) sum += s;
    const double mean = sum * inv_n;

    double sq_dev = 0.0;
    double abs_dev = 0.0;
    double sum_sq = 0.0;
    double sum_abs = 0.0;
    double max_abs = 0.0;
    double max_v = window[0];
    double min_v = window[0];
    double diff_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = window[i];
        const double dev = s - mean;
        sq_dev += dev * dev;
        abs_dev += std::abs(dev);
        sum_sq += s * s;
        sum_abs += std::abs(s);
        max_abs = std::max(max_abs, std::abs(s));
        max_v = std::max(max_v, s);
        min_v = std::min(min_v, s);
        const double d = s - baseline.samples[i];
        diff_sq += d * d;
    }

    const double variance = sq_dev * inv_n;  // population
    const double std_dev = std::sqrt(variance);
    if (std_dev == 0.0) throw DegenerateInput("constant window: standard deviation is zero");

    std::vector<double> sorted(window.begin(), window.end());
    std::sort(sorted.begin(), sorted.end());
    const double median = median_of_sorted(sorted);

    double kurt = 0.0;
    for (double s : window) {
        const double z = (s - mean) / std_dev;
        kurt += z * z * z * z;
    }

    const double rms = std::sqrt(sum_sq * inv_n);
    const double mean_abs = sum_abs * inv_n;

    FeatureVector f;
    f.mean = mean;
    f.median = median;
    f.mad = abs_dev * inv_n;
    f.variance = variance;
    f.std_dev = std_dev;
    f.rms = rms;
    f.damage_index = diff_sq / baseline.energy;
    f.rmsd = std::sqrt(f.damage_index);
    f.kurtosis = kurt * inv_n;
    f.skew = 3.0 * (mean - median) / std_dev;
    f.crest_factor = max_abs / rms;
    f.impulse_factor = max_abs / mean_abs;
    f.shape_factor = rms / mean_abs;
    f.peak_to_peak_diff = (max_v - min_v) - baseline.peak_to_peak;
    f.energy_ratio = sum_sq / baseline.energy;
    f.norm_energy_diff = (sum_sq - baseline.energy) / baseline.energy;
    return f;
}

FeatureScaler fit_scaler(std::span<const FeatureVector> training_vectors) {
    if (training_vectors.size() < 2)
        throw TooFewSamples("scaler fitting needs at least two feature vectors");

    FeatureScaler scaler;
    auto first = training_vectors[0].as_array();
    scaler.min = first;
    scaler.max = first;
    for (const FeatureVector& v : training_vectors.subspan(1)) {
        const auto values = v.as_array();
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            scaler.min[i] = std::min(scaler.min[i], values[i]);
            scaler.max[i] = std::max(scaler.max[i], values[i]);
        }
    }
    return scaler;
}

ScaledFeatures apply_scaler(const FeatureScaler& scaler, const FeatureVector& vector) {
    ScaledFeatures out{};
    const auto values = vector.as_array();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const double span = scaler.max[i] - scaler.min[i];
        out[i] = span == 0.0 ? 0.0 : 2.0 * (values[i] - scaler.min[i]) / span - 1.0;
    }
    return out;
}

}  // namespace gwshm

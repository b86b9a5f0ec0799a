#include "gwshm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gwshm/errors.hpp"

namespace gwshm {

const char* to_string(Verdict verdict) {
    return verdict == Verdict::Damaged ? "damaged" : "healthy";
}

ThresholdFit fit_threshold(std::span<const double> train_errors) {
    if (train_errors.size() < 2)
        throw TooFewSamples("threshold fitting needs at least two training errors");

    double sum = 0.0;
    for (double e : train_errors) sum += e;
    const double mean = sum / static_cast<double>(train_errors.size());

    double sq = 0.0;
    for (double e : train_errors) sq += (e - mean) * (e - mean);
    const double std_dev = std::sqrt(sq / static_cast<double>(train_errors.size()));

    return {mean, std_dev, mean + std_dev};
}

Classification classify(const AnomalyDetector& detector, std::span<const double> scaled_features) {
    const std::vector<double> reconstruction = forward(detector.model, scaled_features);
    const double error = reconstruction_mse(scaled_features, reconstruction);
    return {error > detector.fit.threshold ? Verdict::Damaged : Verdict::Healthy, error};
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.size() == 1) return sorted[0];
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percent(long numerator, long denominator) {
    return denominator == 0 ? 0.0
                            : 100.0 * static_cast<double>(numerator) /
                                  static_cast<double>(denominator);
}

}  // namespace

ErrorStats summarize_errors(std::span<const double> errors) {
    if (errors.empty()) throw EmptyDataset("no errors to summarize");

    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());

    double sum = 0.0;
    for (double e : sorted) sum += e;
    const double mean = sum / static_cast<double>(sorted.size());
    double sq = 0.0;
    for (double e : sorted) sq += (e - mean) * (e - mean);

    ErrorStats stats;
    stats.mean = mean;
    stats.std_dev = std::sqrt(sq / static_cast<double>(sorted.size()));
    stats.min = sorted.front();
    stats.q25 = quantile_sorted(sorted, 0.25);
    stats.median = quantile_sorted(sorted, 0.5);
    stats.q75 = quantile_sorted(sorted, 0.75);
    stats.max = sorted.back();
    return stats;
}

EvalReport evaluate(const AnomalyDetector& detector, std::span<const LabeledFeatures> test_set) {
    if (test_set.empty()) throw EmptyDataset("evaluation set is empty");

    EvalReport report;
    report.threshold = detector.fit.threshold;
    report.train_error_mean = detector.fit.mean;
    report.train_error_std = detector.fit.std_dev;
    report.outcomes.reserve(test_set.size());

    long baseline_healthy = 0;
    long baseline_damaged = 0;
    std::vector<double> baseline_errors;
    // (condition, size) -> indices into outcomes
    std::map<std::pair<int, double>, std::vector<std::size_t>> damaged_groups;

    for (const LabeledFeatures& item : test_set) {
        const ScaledFeatures scaled = apply_scaler(detector.scaler, item.features);
        const Classification c = classify(detector, scaled);
        report.outcomes.push_back({item.record_id, item.condition, item.size_mm, c.error,
                                   c.verdict});
        if (item.condition == ConditionLabel::Baseline) {
            baseline_errors.push_back(c.error);
            (c.verdict == Verdict::Healthy ? baseline_healthy : baseline_damaged)++;
        } else {
            damaged_groups[{static_cast<int>(item.condition), item.size_mm}].push_back(
                report.outcomes.size() - 1);
        }
    }

    if (!baseline_errors.empty()) {
        CaseReport c;
        c.name = "test_baseline";
        c.condition = ConditionLabel::Baseline;
        c.n = baseline_errors.size();
        c.true_negative = baseline_healthy;
        c.false_positive = baseline_damaged;
        c.accuracy_pct = percent(baseline_healthy, baseline_healthy + baseline_damaged);
        c.errors = summarize_errors(baseline_errors);
        report.cases.push_back(std::move(c));
    }

    for (const auto& [key, indices] : damaged_groups) {
        const auto condition = static_cast<ConditionLabel>(key.first);
        const double size_mm = key.second;

        CaseReport c;
        c.name = std::string(to_string(condition)) + "_" +
                 std::to_string(static_cast<long long>(std::llround(size_mm))) + "mm";
        c.condition = condition;
        c.size_mm = size_mm;
        c.n = indices.size();

        std::vector<double> errors;
        errors.reserve(indices.size());
        for (std::size_t idx : indices) {
            const RecordOutcome& o = report.outcomes[idx];
            errors.push_back(o.error);
            (o.verdict == Verdict::Damaged ? c.true_positive : c.false_negative)++;
        }
        // Pool with the held-out baselines so accuracy and F1 are both defined.
        c.true_negative = baseline_healthy;
        c.false_positive = baseline_damaged;

        const long total = c.true_positive + c.false_positive + c.true_negative + c.false_negative;
        c.accuracy_pct = percent(c.true_positive + c.true_negative, total);
        const long f1_denom = 2 * c.true_positive + c.false_positive + c.false_negative;
        c.f1_pct = f1_denom == 0 ? 0.0 : percent(2 * c.true_positive, f1_denom);
        c.errors = summarize_errors(errors);
        report.cases.push_back(std::move(c));
    }

    return report;
}

}  // namespace gwshm

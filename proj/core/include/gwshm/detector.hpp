#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwshm/autoencoder.hpp"
#include "gwshm/features.hpp"
#include "gwshm/signal_model.hpp"

namespace gwshm {

enum class Verdict { Healthy, Damaged };

const char* to_string(Verdict verdict);

// mean + one population standard deviation of the healthy training errors.
struct ThresholdFit {
    double mean = 0.0;
    double std_dev = 0.0;
    double threshold = 0.0;
};

ThresholdFit fit_threshold(std::span<const double> train_errors);

struct AnomalyDetector {
    DenseAutoencoder model;
    FeatureScaler scaler;
    ThresholdFit fit;

    double threshold() const { return fit.threshold; }
};

struct Classification {
    Verdict verdict = Verdict::Healthy;
    double error = 0.0;
};

// Damaged iff the reconstruction error strictly exceeds the threshold. The
// input must already be scaled with the detector's scaler.
Classification classify(const AnomalyDetector& detector, std::span<const double> scaled_features);

// Raw (unscaled) feature vector plus its ground truth, as read back from a
// features table.
struct LabeledFeatures {
    std::string record_id;
    FeatureVector features;
    ConditionLabel condition = ConditionLabel::Baseline;
    double size_mm = 0.0;
};

struct ErrorStats {
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

ErrorStats summarize_errors(std::span<const double> errors);

// One evaluation case: the test baselines alone, or one damaged
// (condition, size) group pooled with the test baselines as the negative
// class (Damaged = positive). Error stats cover the case's own records only.
struct CaseReport {
    std::string name;
    ConditionLabel condition = ConditionLabel::Baseline;
    double size_mm = 0.0;
    std::size_t n = 0;
    long true_positive = 0;
    long false_positive = 0;
    long true_negative = 0;
    long false_negative = 0;
    double accuracy_pct = 0.0;
    std::optional<double> f1_pct;  // absent when the case has no positives
    ErrorStats errors;
};

struct RecordOutcome {
    std::string record_id;
    ConditionLabel condition = ConditionLabel::Baseline;
    double size_mm = 0.0;
    double error = 0.0;
    Verdict verdict = Verdict::Healthy;
};

struct EvalReport {
    double threshold = 0.0;
    double train_error_mean = 0.0;
    double train_error_std = 0.0;
    std::vector<CaseReport> cases;
    std::vector<RecordOutcome> outcomes;
};

// Scales each vector with the detector's scaler, classifies it, and builds
// the per-case report. Baseline entries are treated as the held-out test
// baselines.
EvalReport evaluate(const AnomalyDetector& detector, std::span<const LabeledFeatures> test_set);

}  // namespace gwshm

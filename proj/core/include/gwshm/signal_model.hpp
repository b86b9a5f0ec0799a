#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gwshm {

inline constexpr std::size_t kDefaultCaptureSamples = 4096;
inline constexpr double kDefaultSampleRateHz = 10e6;

enum class DamageKind { None, Trf, Lfa };
enum class ConditionLabel { Baseline, Trf, Lfa };

const char* to_string(DamageKind kind);
const char* to_string(ConditionLabel label);
ConditionLabel condition_from_string(const std::string& text);
DamageKind damage_kind_for(ConditionLabel label);

// Windowed sinusoid excitation. Samples are dimensionless with peak 1.0 and
// zero endpoints.
struct ToneBurst {
    double center_frequency_hz = 75e3;
    int cycles = 5;
    double sample_rate_hz = kDefaultSampleRateHz;
    std::vector<double> samples;
};

struct EnvCondition {
    double temperature_c = 30.0;
};

// kind == None <=> size_mm == 0; otherwise size in [1, 50] mm.
struct DamageSpec {
    DamageKind kind = DamageKind::None;
    double size_mm = 0.0;
};

struct PathSpec {
    std::string path_id;
    double tx_rx_distance_mm = 180.0;
};

// Delay-and-scale propagation model. The damage gains are magnitudes; the
// sign is taken from the damage kind (LFA raises amplitude/velocity, TRF
// lowers them). The companion mode is a copy of the excitation at 3x group
// velocity whose amplitude does NOT follow A(T, damage), so per-record
// normalization cannot erase the amplitude information.
struct PropagationParams {
    double group_velocity_km_s = 1.061;
    double amp_loss_per_c = 0.003;
    double vel_shift_per_c = -0.0005;
    double damage_amp_gain_per_mm = 0.01;
    double damage_vel_gain_per_mm = 0.002;
    double reference_temperature_c = 30.0;
    double secondary_mode_ratio = 0.3;
};

struct GwRecord {
    std::vector<double> samples;
    double sample_rate_hz = kDefaultSampleRateHz;
    PathSpec path;
    EnvCondition env;
    DamageSpec damage;
    int noise_copy = 0;  // 0 = clean
    ConditionLabel condition_label = ConditionLabel::Baseline;
};

// Amplitude scale A(T, damage) and group velocity v(T, damage) in km/s.
double amplitude_scale(const EnvCondition& env, const DamageSpec& damage,
                       const PropagationParams& params);
double group_velocity_km_s(const EnvCondition& env, const DamageSpec& damage,
                           const PropagationParams& params);

ToneBurst hanning_tone_burst(double center_frequency_hz, int cycles, double sample_rate_hz);

GwRecord propagate(const ToneBurst& burst, const PathSpec& path, const EnvCondition& env,
                   const DamageSpec& damage, const PropagationParams& params,
                   std::size_t capture_samples = kDefaultCaptureSamples);

// One condition axis of a scenario: the label plus the damage sizes to sweep
// (ignored for Baseline, which always uses size 0).
struct ScenarioCondition {
    ConditionLabel label = ConditionLabel::Baseline;
    std::vector<double> sizes_mm;
};

struct ExcitationSpec {
    double center_frequency_hz = 75e3;
    int cycles = 5;
    double sample_rate_hz = kDefaultSampleRateHz;
    std::size_t capture_samples = kDefaultCaptureSamples;
};

struct Scenario {
    std::vector<double> temperatures_c;
    std::vector<PathSpec> paths;
    std::vector<ScenarioCondition> conditions;
    ExcitationSpec excitation;
    PropagationParams propagation;
};

// Cartesian product of condition x size x path x temperature, one clean
// record each, in that fixed order. Fully deterministic; the seed is part of
// the reproducibility contract shared with the augmentation stage.
std::vector<GwRecord> generate_scenario(const Scenario& scenario, std::uint64_t seed);

void validate_damage(const DamageSpec& damage);

}  // namespace gwshm

#include "gwshm/signal_model.hpp"

#include <algorithm>
#include <cmath>

#include "gwshm/errors.hpp"

namespace gwshm {

const char* to_string(DamageKind kind) {
    switch (kind) {
        case DamageKind::None: return "none";
        case DamageKind::Trf: return "trf";
        case DamageKind::Lfa: return "lfa";
    }
    return "none";
}

const char* to_string(ConditionLabel label) {
    switch (label) {
        case ConditionLabel::Baseline: return "baseline";
        case ConditionLabel::Trf: return "trf";
        case ConditionLabel::Lfa: return "lfa";
    }
    return "baseline";
}

ConditionLabel condition_from_string(const std::string& text) {
    if (text == "baseline") return ConditionLabel::Baseline;
    if (text == "trf") return ConditionLabel::Trf;
    if (text == "lfa") return ConditionLabel::Lfa;
    throw ConfigError("unknown condition '" + text + "' (expected baseline|trf|lfa)");
}

DamageKind damage_kind_for(ConditionLabel label) {
    switch (label) {
        case ConditionLabel::Baseline: return DamageKind::None;
        case ConditionLabel::Trf: return DamageKind::Trf;
        case ConditionLabel::Lfa: return DamageKind::Lfa;
    }
    return DamageKind::None;
}

void validate_damage(const DamageSpec& damage) {
    if (damage.kind == DamageKind::None) {
        if (damage.size_mm != 0.0)
            throw InvalidArgument("damage kind none requires size 0 mm");
        return;
    }
    if (damage.size_mm < 1.0 || damage.size_mm > 50.0)
        throw InvalidArgument("damage size must lie in [1, 50] mm");
}

namespace {

// +1 for disbond (LFA), -1 for delamination (TRF).
double damage_sign(DamageKind kind) {
    switch (kind) {
        case DamageKind::Lfa: return 1.0;
        case DamageKind::Trf: return -1.0;
        case DamageKind::None: return 0.0;
    }
    return 0.0;
}

}  // namespace

double amplitude_scale(const EnvCondition& env, const DamageSpec& damage,
                       const PropagationParams& params) {
    const double dt = env.temperature_c - params.reference_temperature_c;
    const double sign = damage_sign(damage.kind);
    return (1.0 - params.amp_loss_per_c * dt) *
           (1.0 + sign * params.damage_amp_gain_per_mm * damage.size_mm);
}

double group_velocity_km_s(const EnvCondition& env, const DamageSpec& damage,
                           const PropagationParams& params) {
    const double dt = env.temperature_c - params.reference_temperature_c;
    const double sign = damage_sign(damage.kind);
    return params.group_velocity_km_s * (1.0 + params.vel_shift_per_c * dt) *
           (1.0 + sign * params.damage_vel_gain_per_mm * damage.size_mm);
}

ToneBurst hanning_tone_burst(double center_frequency_hz, int cycles, double sample_rate_hz) {
    if (!(center_frequency_hz > 0.0))
        throw InvalidArgument("tone burst center frequency must be positive");
    if (cycles < 1)
        throw InvalidArgument("tone burst needs at least one cycle");
    if (!(sample_rate_hz > 0.0))
        throw InvalidArgument("tone burst sample rate must be positive");
    if (sample_rate_hz < 10.0 * center_frequency_hz)
        throw InvalidArgument("tone burst undersampled: need sample_rate >= 10 x center frequency");

    const auto n = static_cast<std::size_t>(
        std::llround(static_cast<double>(cycles) / center_frequency_hz * sample_rate_hz));

    ToneBurst burst;
    burst.center_frequency_hz = center_frequency_hz;
    burst.cycles = cycles;
    burst.sample_rate_hz = sample_rate_hz;
    burst.samples.resize(n);

    constexpr double two_pi = 6.283185307179586476925286766559;
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double window =
            0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n - 1)));
        const double carrier =
            std::sin(two_pi * center_frequency_hz * static_cast<double>(i) / sample_rate_hz);
        burst.samples[i] = window * carrier;
        peak = std::max(peak, std::abs(burst.samples[i]));
    }
    for (double& s : burst.samples) s /= peak;
    return burst;
}

GwRecord propagate(const ToneBurst& burst, const PathSpec& path, const EnvCondition& env,
                   const DamageSpec& damage, const PropagationParams& params,
                   std::size_t capture_samples) {
    validate_damage(damage);
    if (!(path.tx_rx_distance_mm > 0.0))
        throw InvalidArgument("tx-rx distance must be positive");
    if (!(params.group_velocity_km_s > 0.0))
        throw InvalidArgument("group velocity must be positive");
    if (capture_samples == 0)
        throw InvalidArgument("capture window must hold at least one sample");

    const double amp = amplitude_scale(env, damage, params);
    const double vel = group_velocity_km_s(env, damage, params);
    if (!(amp > 0.0) || !(vel > 0.0))
        throw InvalidArgument("temperature/damage outside the range where the signal model is valid");

    // v in km/s equals 1e6 mm/s. The companion mode runs at 3x the group
    // velocity and shares the temperature response but not the damage gains:
    // temperature attenuation is a propagation effect common to all modes,
    // while the A0 packet carries the damage sensitivity.
    const double primary_delay_s = path.tx_rx_distance_mm / (vel * 1e6);
    const double companion_vel = group_velocity_km_s(env, DamageSpec{}, params);
    const double secondary_delay_s = path.tx_rx_distance_mm / (3.0 * companion_vel * 1e6);
    const double companion_amp =
        params.secondary_mode_ratio * amplitude_scale(env, DamageSpec{}, params);
    const double capture_duration_s =
        static_cast<double>(capture_samples) / burst.sample_rate_hz;
    if (primary_delay_s > capture_duration_s)
        throw InvalidArgument("wavepacket arrival falls outside the capture window");

    GwRecord record;
    record.samples.assign(capture_samples, 0.0);
    record.sample_rate_hz = burst.sample_rate_hz;
    record.path = path;
    record.env = env;
    record.damage = damage;
    record.noise_copy = 0;
    record.condition_label = damage.kind == DamageKind::Trf   ? ConditionLabel::Trf
                             : damage.kind == DamageKind::Lfa ? ConditionLabel::Lfa
                                                              : ConditionLabel::Baseline;

    const auto add_packet = [&](double delay_s, double scale) {
        const auto offset =
            static_cast<std::size_t>(std::llround(delay_s * burst.sample_rate_hz));
        const std::size_t end = std::min(offset + burst.samples.size(), capture_samples);
        for (std::size_t i = offset; i < end; ++i)
            record.samples[i] += scale * burst.samples[i - offset];
    };

    add_packet(secondary_delay_s, companion_amp);
    add_packet(primary_delay_s, amp);
    return record;
}

std::vector<GwRecord> generate_scenario(const Scenario& scenario, std::uint64_t /*seed*/) {
    if (scenario.temperatures_c.empty())
        throw InvalidArgument("scenario temperature axis is empty");
    if (scenario.paths.empty())
        throw InvalidArgument("scenario path axis is empty");
    if (scenario.conditions.empty())
        throw InvalidArgument("scenario condition axis is empty");

    const ToneBurst burst =
        hanning_tone_burst(scenario.excitation.center_frequency_hz, scenario.excitation.cycles,
                           scenario.excitation.sample_rate_hz);

    std::vector<GwRecord> records;
    for (const ScenarioCondition& condition : scenario.conditions) {
        std::vector<double> sizes = condition.sizes_mm;
        if (condition.label == ConditionLabel::Baseline) {
            sizes = {0.0};
        } else if (sizes.empty()) {
            throw InvalidArgument("damaged scenario condition lists no sizes");
        }
        for (double size_mm : sizes) {
            DamageSpec damage{damage_kind_for(condition.label),
                              condition.label == ConditionLabel::Baseline ? 0.0 : size_mm};
            for (const PathSpec& path : scenario.paths) {
                for (double temperature : scenario.temperatures_c) {
                    GwRecord record =
                        propagate(burst, path, EnvCondition{temperature}, damage,
                                  scenario.propagation, scenario.excitation.capture_samples);
                    record.condition_label = condition.label;
                    records.push_back(std::move(record));
                }
            }
        }
    }
    return records;
}

}  // namespace gwshm

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gwshm/detector.hpp"

namespace gwshm {

// "GWAE" image layout (all integers and floats little-endian):
//   magic "GWAE" | version u16 | layer_count u16
//   per layer: in_width u16 | out_width u16 | trainable u8 | activation u8
//   scaler: 16 min f32 | 16 max f32
//   payload: per trainable layer, weights row-major out x in then bias, f32
//   threshold f32 | crc32 (IEEE) of all preceding bytes, u32
// docs/edge_model_format.md is the normative description.

inline constexpr std::uint16_t kEdgeFormatVersion = 1;
inline constexpr std::size_t kEdgeInputWidth = 16;
inline constexpr std::size_t kEdgeMaxLayerWidth = 64;

struct EdgeLayer {
    std::uint16_t in_width = 0;
    std::uint16_t out_width = 0;
    bool trainable = false;
    Activation activation = Activation::ReLU;
};

// Immutable in-memory form of a loaded image; shareable across threads.
struct EdgeModel {
    std::vector<EdgeLayer> layers;
    std::array<float, kEdgeInputWidth> scaler_min{};
    std::array<float, kEdgeInputWidth> scaler_max{};
    std::vector<float> payload;  // weights+biases in layer order
    float threshold = 0.0f;

    std::size_t parameter_count() const;
    std::size_t max_width() const;
};

std::uint32_t crc32_ieee(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const AnomalyDetector& detector);
std::vector<std::uint8_t> serialize(const EdgeModel& model);

// Validates magic, version, structure, CRC and width chaining; throws
// BadMagic / BadVersion / BadCrc / InconsistentDimensions, never crashes.
EdgeModel load_edge_model(std::span<const std::uint8_t> bytes);

// Fixed per-thread working memory: two ping-pong activation buffers at the
// maximum supported layer width plus the scaled input kept for the error
// computation. 576 bytes total; nothing is allocated during inference.
struct InferenceScratch {
    std::array<float, kEdgeMaxLayerWidth> ping{};
    std::array<float, kEdgeMaxLayerWidth> pong{};
    std::array<float, kEdgeInputWidth> scaled_input{};
};

struct EdgeInference {
    double error = 0.0;
    Verdict verdict = Verdict::Healthy;
};

// Scales the raw features with the embedded scaler, runs the forward pass in
// 32-bit arithmetic, and compares the reconstruction MSE to the embedded
// threshold.
EdgeInference edge_infer(const EdgeModel& model, std::span<const double> raw_features,
                         InferenceScratch& scratch);

}  // namespace gwshm

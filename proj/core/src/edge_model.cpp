#include "gwshm/edge_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gwshm/errors.hpp"

namespace gwshm {

namespace {

constexpr std::array<char, 4> kMagic = {'G', 'W', 'A', 'E'};

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int bit = 0; bit < 8; ++bit)
            c = (c & 1u) ? 0xedb88320u ^ (c >> 1) : (c >> 1);
        table[i] = c;
    }
    return table;
}

void push_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void push_f32(std::vector<std::uint8_t>& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    push_u32(out, bits);
}

// Bounds-checked little-endian reader; underruns surface as
// inconsistent-dimensions so truncated images fail cleanly.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t position() const { return pos_; }

    std::uint8_t u8() {
        require(1);
        return bytes_[pos_++];
    }

    std::uint16_t u16() {
        require(2);
        const std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_]) |
                                static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8;
        pos_ += 2;
        return v;
    }

    std::uint32_t u32() {
        require(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    float f32() {
        const std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

private:
    void require(std::size_t n) const {
        if (remaining() < n)
            throw InconsistentDimensions("image truncated while reading the header");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> serialize_image(const std::vector<EdgeLayer>& layers,
                                          std::span<const float> scaler_min,
                                          std::span<const float> scaler_max,
                                          std::span<const float> payload, float threshold) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 2 + 2 + layers.size() * 6 + (32 + payload.size() + 1) * 4 + 4);

    out.insert(out.end(), kMagic.begin(), kMagic.end());
    push_u16(out, kEdgeFormatVersion);
    push_u16(out, static_cast<std::uint16_t>(layers.size()));
    for (const EdgeLayer& layer : layers) {
        push_u16(out, layer.in_width);
        push_u16(out, layer.out_width);
        out.push_back(layer.trainable ? 1 : 0);
        out.push_back(layer.activation == Activation::ReLU ? 0 : 1);
    }
    for (float v : scaler_min) push_f32(out, v);
    for (float v : scaler_max) push_f32(out, v);
    for (float v : payload) push_f32(out, v);
    push_f32(out, threshold);
    push_u32(out, crc32_ieee(out));
    return out;
}

}  // namespace

std::uint32_t crc32_ieee(std::span<const std::uint8_t> bytes) {
    static const std::array<std::uint32_t, 256> table = make_crc_table();
    std::uint32_t crc = 0xffffffffu;
    for (std::uint8_t b : bytes) crc = table[(crc ^ b) & 0xffu] ^ (crc >> 8);
    return crc ^ 0xffffffffu;
}

std::size_t EdgeModel::parameter_count() const {
    std::size_t count = 0;
    for (const EdgeLayer& layer : layers)
        if (layer.trainable)
            count += static_cast<std::size_t>(layer.in_width) * layer.out_width + layer.out_width;
    return count;
}

std::size_t EdgeModel::max_width() const {
    std::size_t w = layers.empty() ? 0 : layers.front().in_width;
    for (const EdgeLayer& layer : layers) w = std::max<std::size_t>(w, layer.out_width);
    return w;
}

std::vector<std::uint8_t> serialize(const AnomalyDetector& detector) {
    const DenseAutoencoder& model = detector.model;
    if (model.input_width != kEdgeInputWidth)
        throw DimensionMismatch("edge image requires a 16-feature input layer");

    std::vector<EdgeLayer> layers;
    std::vector<float> payload;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        EdgeLayer layer;
        layer.in_width = static_cast<std::uint16_t>(model.layer_input_width(l));
        layer.out_width = static_cast<std::uint16_t>(model.layers[l].output_width);
        layer.trainable = model.layers[l].trainable;
        layer.activation = model.layers[l].activation;
        layers.push_back(layer);
        if (layer.trainable) {
            for (double w : model.weights[l]) payload.push_back(static_cast<float>(w));
            for (double b : model.biases[l]) payload.push_back(static_cast<float>(b));
        }
    }

    std::array<float, kEdgeInputWidth> smin{};
    std::array<float, kEdgeInputWidth> smax{};
    for (std::size_t i = 0; i < kEdgeInputWidth; ++i) {
        smin[i] = static_cast<float>(detector.scaler.min[i]);
        smax[i] = static_cast<float>(detector.scaler.max[i]);
    }
    return serialize_image(layers, smin, smax, payload,
                           static_cast<float>(detector.fit.threshold));
}

std::vector<std::uint8_t> serialize(const EdgeModel& model) {
    return serialize_image(model.layers, model.scaler_min, model.scaler_max, model.payload,
                           model.threshold);
}

EdgeModel load_edge_model(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw InconsistentDimensions("image shorter than the magic field");
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
        throw BadMagic("image does not start with GWAE");

    ByteReader reader(bytes.subspan(4));
    const std::uint16_t version = reader.u16();
    if (version != kEdgeFormatVersion)
        throw BadVersion("unsupported image format version " + std::to_string(version));

    const std::uint16_t layer_count = reader.u16();
    if (layer_count == 0) throw InconsistentDimensions("image declares zero layers");

    EdgeModel model;
    model.layers.resize(layer_count);
    std::size_t payload_floats = 0;
    for (EdgeLayer& layer : model.layers) {
        layer.in_width = reader.u16();
        layer.out_width = reader.u16();
        const std::uint8_t trainable = reader.u8();
        const std::uint8_t activation = reader.u8();
        if (trainable > 1) throw InconsistentDimensions("trainable flag must be 0 or 1");
        if (activation > 1) throw InconsistentDimensions("unknown activation tag");
        if (layer.in_width == 0 || layer.out_width == 0)
            throw InconsistentDimensions("layer widths must be positive");
        layer.trainable = trainable == 1;
        layer.activation = activation == 0 ? Activation::ReLU : Activation::Linear;
        if (layer.trainable)
            payload_floats +=
                static_cast<std::size_t>(layer.in_width) * layer.out_width + layer.out_width;
    }

    const std::size_t expected_size = 4 + reader.position() +
                                      (2 * kEdgeInputWidth + payload_floats + 1) * 4 + 4;
    if (bytes.size() != expected_size)
        throw InconsistentDimensions("image size does not match the declared layer table");

    const std::uint32_t stored_crc = static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
                                     static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8 |
                                     static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16 |
                                     static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24;
    if (crc32_ieee(bytes.first(bytes.size() - 4)) != stored_crc)
        throw BadCrc("image checksum mismatch");

    for (std::size_t l = 0; l + 1 < model.layers.size(); ++l)
        if (model.layers[l].out_width != model.layers[l + 1].in_width)
            throw InconsistentDimensions("layer widths do not chain");
    for (const EdgeLayer& layer : model.layers)
        if (!layer.trainable && layer.in_width != layer.out_width)
            throw InconsistentDimensions("a non-trainable layer cannot change the width");

    for (std::size_t i = 0; i < kEdgeInputWidth; ++i) model.scaler_min[i] = reader.f32();
    for (std::size_t i = 0; i < kEdgeInputWidth; ++i) model.scaler_max[i] = reader.f32();
    model.payload.resize(payload_floats);
    for (float& v : model.payload) v = reader.f32();
    model.threshold = reader.f32();
    return model;
}

EdgeInference edge_infer(const EdgeModel& model, std::span<const double> raw_features,
                         InferenceScratch& scratch) {
    if (raw_features.size() != kEdgeInputWidth)
        throw DimensionMismatch("edge inference expects 16 raw features");
    if (model.layers.empty() || model.layers.front().in_width != kEdgeInputWidth)
        throw DimensionMismatch("model input layer is not 16 wide");
    if (model.layers.back().out_width != kEdgeInputWidth)
        throw DimensionMismatch("model output layer is not 16 wide");
    if (model.max_width() > kEdgeMaxLayerWidth)
        throw DimensionMismatch("model exceeds the fixed scratch width");

    for (std::size_t i = 0; i < kEdgeInputWidth; ++i) {
        const float span = model.scaler_max[i] - model.scaler_min[i];
        const float x = static_cast<float>(raw_features[i]);
        scratch.scaled_input[i] =
            span == 0.0f ? 0.0f : 2.0f * (x - model.scaler_min[i]) / span - 1.0f;
    }

    float* current = scratch.ping.data();
    float* next = scratch.pong.data();
    std::copy(scratch.scaled_input.begin(), scratch.scaled_input.end(), current);

    const float* weights = model.payload.data();
    for (const EdgeLayer& layer : model.layers) {
        if (layer.trainable) {
            const float* bias = weights + static_cast<std::size_t>(layer.in_width) * layer.out_width;
            for (std::size_t o = 0; o < layer.out_width; ++o) {
                float acc = bias[o];
                const float* row = weights + o * layer.in_width;
                for (std::size_t i = 0; i < layer.in_width; ++i) acc += row[i] * current[i];
                next[o] = layer.activation == Activation::ReLU ? std::max(0.0f, acc) : acc;
            }
            weights = bias + layer.out_width;
            std::swap(current, next);
        } else {
            for (std::size_t o = 0; o < layer.out_width; ++o)
                current[o] = layer.activation == Activation::ReLU ? std::max(0.0f, current[o])
                                                                  : current[o];
        }
    }

    float acc = 0.0f;
    for (std::size_t i = 0; i < kEdgeInputWidth; ++i) {
        const float d = scratch.scaled_input[i] - current[i];
        acc += d * d;
    }
    const float error = acc / static_cast<float>(kEdgeInputWidth);
    return {static_cast<double>(error),
            error > model.threshold ? Verdict::Damaged : Verdict::Healthy};
}

}  // namespace gwshm

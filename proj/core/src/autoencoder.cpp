#include "gwshm/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gwshm/errors.hpp"
#include "gwshm/rng.hpp"

namespace gwshm {

std::size_t DenseAutoencoder::layer_input_width(std::size_t layer) const {
    return layer == 0 ? input_width : layers[layer - 1].output_width;
}

std::size_t DenseAutoencoder::parameter_count() const {
    const auto counts = per_layer_parameter_counts();
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::vector<std::size_t> DenseAutoencoder::per_layer_parameter_counts() const {
    std::vector<std::size_t> counts(layers.size(), 0);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (!layers[l].trainable) continue;
        const std::size_t in = layer_input_width(l);
        const std::size_t out = layers[l].output_width;
        counts[l] = in * out + out;
    }
    return counts;
}

std::size_t DenseAutoencoder::max_width() const {
    std::size_t w = input_width;
    for (const LayerSpec& layer : layers) w = std::max(w, layer.output_width);
    return w;
}

DenseAutoencoder build_custom_model(std::size_t input_width, std::vector<LayerSpec> layers,
                                    std::uint64_t seed) {
    if (input_width == 0) throw InvalidArgument("model input width must be positive");
    if (layers.empty()) throw InvalidArgument("model needs at least one layer");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].output_width == 0)
            throw InvalidArgument("layer output width must be positive");
        const std::size_t in = l == 0 ? input_width : layers[l - 1].output_width;
        if (!layers[l].trainable && layers[l].output_width != in)
            throw InvalidArgument("a non-trainable layer cannot change the width");
    }

    DenseAutoencoder model;
    model.input_width = input_width;
    model.layers = std::move(layers);
    model.weights.resize(model.layers.size());
    model.biases.resize(model.layers.size());

    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        if (!model.layers[l].trainable) continue;
        const std::size_t in = model.layer_input_width(l);
        const std::size_t out = model.layers[l].output_width;
        const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
        model.weights[l].resize(in * out);
        for (double& w : model.weights[l]) w = bound * (2.0 * uniform_unit(rng) - 1.0);
        model.biases[l].assign(out, 0.0);
    }
    return model;
}

DenseAutoencoder build_model(std::uint64_t seed) {
    std::vector<LayerSpec> layers = {
        {16, true, Activation::ReLU},  {32, true, Activation::ReLU},
        {64, true, Activation::ReLU},  {64, false, Activation::ReLU},
        {64, true, Activation::ReLU},  {32, true, Activation::ReLU},
        {16, true, Activation::Linear},
    };
    return build_custom_model(16, std::move(layers), seed);
}

namespace {

double activate(Activation activation, double z) {
    return activation == Activation::ReLU ? std::max(0.0, z) : z;
}

double activate_derivative(Activation activation, double z) {
    return activation == Activation::ReLU ? (z > 0.0 ? 1.0 : 0.0) : 1.0;
}

// Per-layer pre-activations and activations kept for the backward pass.
struct ForwardTrace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;
};

void forward_trace(const DenseAutoencoder& model, std::span<const double> input,
                   ForwardTrace& trace) {
    const std::size_t n_layers = model.layers.size();
    trace.pre.resize(n_layers);
    trace.post.resize(n_layers);

    std::span<const double> current = input;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const LayerSpec& layer = model.layers[l];
        const std::size_t out = layer.output_width;
        auto& z = trace.pre[l];
        auto& a = trace.post[l];
        z.resize(out);
        a.resize(out);
        if (layer.trainable) {
            const std::size_t in = model.layer_input_width(l);
            const double* w = model.weights[l].data();
            for (std::size_t o = 0; o < out; ++o) {
                double acc = model.biases[l][o];
                const double* row = w + o * in;
                for (std::size_t i = 0; i < in; ++i) acc += row[i] * current[i];
                z[o] = acc;
            }
        } else {
            std::copy(current.begin(), current.end(), z.begin());
        }
        for (std::size_t o = 0; o < out; ++o) a[o] = activate(layer.activation, z[o]);
        current = a;
    }
}

}  // namespace

std::vector<double> forward(const DenseAutoencoder& model, std::span<const double> input) {
    if (input.size() != model.input_width)
        throw DimensionMismatch("model input width mismatch");
    ForwardTrace trace;
    forward_trace(model, input, trace);
    return trace.post.back();
}

double reconstruction_mse(std::span<const double> input, std::span<const double> reconstruction) {
    if (input.size() != reconstruction.size())
        throw DimensionMismatch("reconstruction length differs from input length");
    if (input.empty()) throw DimensionMismatch("reconstruction MSE of empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const double d = input[i] - reconstruction[i];
        acc += d * d;
    }
    return acc / static_cast<double>(input.size());
}

AdamOptimizer::AdamOptimizer(std::size_t parameter_count, double learning_rate, double beta1,
                             double beta2, double epsilon)
    : learning_rate_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon),
      first_moment_(parameter_count, 0.0),
      second_moment_(parameter_count, 0.0) {
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
}

void AdamOptimizer::step(std::span<double> parameters, std::span<const double> gradients) {
    if (parameters.size() != first_moment_.size() || gradients.size() != first_moment_.size())
        throw DimensionMismatch("optimizer state does not match the parameter count");

    ++step_count_;
    const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(step_count_));
    const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(step_count_));
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        const double g = gradients[i];
        first_moment_[i] = beta1_ * first_moment_[i] + (1.0 - beta1_) * g;
        second_moment_[i] = beta2_ * second_moment_[i] + (1.0 - beta2_) * g * g;
        const double m_hat = first_moment_[i] / correction1;
        const double v_hat = second_moment_[i] / correction2;
        parameters[i] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + epsilon_);
    }
}

namespace {

struct GradientBuffers {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    explicit GradientBuffers(const DenseAutoencoder& model) {
        weights.resize(model.layers.size());
        biases.resize(model.layers.size());
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            weights[l].assign(model.weights[l].size(), 0.0);
            biases[l].assign(model.biases[l].size(), 0.0);
        }
    }

    void zero() {
        for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
        for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
    }
};

// Accumulates d(MSE)/d(parameters) for one sample into `grads`; returns the
// sample's reconstruction MSE.
double backward_accumulate(const DenseAutoencoder& model, std::span<const double> input,
                           ForwardTrace& trace, GradientBuffers& grads) {
    forward_trace(model, input, trace);

    const std::size_t n_layers = model.layers.size();
    const auto& output = trace.post.back();
    const double inv_out = 1.0 / static_cast<double>(output.size());

    double mse = 0.0;
    std::vector<double> delta(output.size());
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double diff = output[i] - input[i];
        mse += diff * diff;
        delta[i] = 2.0 * diff * inv_out;  // dL/da for the last layer
    }
    mse *= inv_out;

    for (std::size_t l = n_layers; l-- > 0;) {
        const LayerSpec& layer = model.layers[l];
        auto& z = trace.pre[l];
        for (std::size_t o = 0; o < layer.output_width; ++o)
            delta[o] *= activate_derivative(layer.activation, z[o]);

        const std::span<const double> below =
            l == 0 ? input : std::span<const double>(trace.post[l - 1]);
        if (layer.trainable) {
            const std::size_t in = model.layer_input_width(l);
            double* gw = grads.weights[l].data();
            for (std::size_t o = 0; o < layer.output_width; ++o) {
                const double d = delta[o];
                double* row = gw + o * in;
                for (std::size_t i = 0; i < in; ++i) row[i] += d * below[i];
                grads.biases[l][o] += d;
            }
            if (l > 0) {
                std::vector<double> next(in, 0.0);
                const double* w = model.weights[l].data();
                for (std::size_t o = 0; o < layer.output_width; ++o) {
                    const double d = delta[o];
                    const double* row = w + o * in;
                    for (std::size_t i = 0; i < in; ++i) next[i] += row[i] * d;
                }
                delta = std::move(next);
            }
        }
        // Non-trainable layers feed dL/dz straight through (z is the input).
    }
    return mse;
}

}  // namespace

ModelGradients loss_gradients(const DenseAutoencoder& model,
                              const std::vector<std::vector<double>>& batch) {
    if (batch.empty()) throw EmptyDataset("gradient of an empty batch");
    for (const auto& s : batch)
        if (s.size() != model.input_width)
            throw DimensionMismatch("sample width differs from model input width");

    GradientBuffers grads(model);
    ForwardTrace trace;
    for (const auto& sample : batch) backward_accumulate(model, sample, trace, grads);

    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    for (auto& layer : grads.weights)
        for (double& g : layer) g *= inv_batch;
    for (auto& layer : grads.biases)
        for (double& g : layer) g *= inv_batch;
    return {std::move(grads.weights), std::move(grads.biases)};
}

TrainResult train(DenseAutoencoder& model, const std::vector<std::vector<double>>& samples,
                  const TrainConfig& cfg) {
    if (samples.empty()) throw EmptyDataset("training set is empty");
    if (!(cfg.learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
    if (cfg.batch_size < 1) throw InvalidArgument("batch size must be at least 1");
    if (cfg.epochs < 1) throw InvalidArgument("epoch count must be at least 1");
    for (const auto& s : samples)
        if (s.size() != model.input_width)
            throw DimensionMismatch("training sample width differs from model input width");

    std::vector<AdamOptimizer> weight_opts;
    std::vector<AdamOptimizer> bias_opts;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        weight_opts.emplace_back(model.weights[l].size(), cfg.learning_rate, cfg.beta1, cfg.beta2,
                                 cfg.epsilon);
        bias_opts.emplace_back(model.biases[l].size(), cfg.learning_rate, cfg.beta1, cfg.beta2,
                               cfg.epsilon);
    }

    std::mt19937_64 shuffle_rng(cfg.seed);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    GradientBuffers grads(model);
    ForwardTrace trace;
    TrainResult result;
    result.loss_history.reserve(cfg.epochs);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        deterministic_shuffle(order, shuffle_rng);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, order.size());
            const double inv_batch = 1.0 / static_cast<double>(end - start);

            grads.zero();
            for (std::size_t i = start; i < end; ++i)
                epoch_loss += backward_accumulate(model, samples[order[i]], trace, grads);

            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                if (!model.layers[l].trainable) continue;
                for (double& g : grads.weights[l]) g *= inv_batch;
                for (double& g : grads.biases[l]) g *= inv_batch;
                weight_opts[l].step(model.weights[l], grads.weights[l]);
                bias_opts[l].step(model.biases[l], grads.biases[l]);
            }
        }
        result.loss_history.push_back(epoch_loss / static_cast<double>(samples.size()));
    }
    return result;
}

double mean_reconstruction_mse(const DenseAutoencoder& model,
                               const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) throw EmptyDataset("no samples to evaluate");
    double acc = 0.0;
    for (const auto& s : samples) acc += reconstruction_mse(s, forward(model, s));
    return acc / static_cast<double>(samples.size());
}

double kfold_score(const std::vector<std::vector<double>>& samples, const TrainConfig& cfg,
                   std::size_t k) {
    if (k < 2) throw InvalidArgument("cross-validation needs at least two folds");
    if (samples.size() < k)
        throw TooFewSamples("fewer samples than cross-validation folds");

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(cfg.seed, 0xf01d));
    deterministic_shuffle(order, rng);

    double total = 0.0;
    for (std::size_t fold = 0; fold < k; ++fold) {
        std::vector<std::vector<double>> train_set;
        std::vector<std::vector<double>> val_set;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i % k == fold)
                val_set.push_back(samples[order[i]]);
            else
                train_set.push_back(samples[order[i]]);
        }

        DenseAutoencoder model = build_model(derive_seed(cfg.seed, fold, 1));
        TrainConfig fold_cfg = cfg;
        fold_cfg.seed = derive_seed(cfg.seed, fold, 2);
        train(model, train_set, fold_cfg);
        total += mean_reconstruction_mse(model, val_set);
    }
    return total / static_cast<double>(k);
}

SearchResult random_search(const SearchSpace& space,
                           const std::vector<std::vector<double>>& samples, std::uint64_t seed) {
    if (space.learning_rates.empty() || space.batch_sizes.empty() || space.epoch_counts.empty())
        throw InvalidArgument("search space has an empty candidate set");
    if (space.iterations < 1) throw InvalidArgument("search needs at least one iteration");

    std::mt19937_64 rng(seed);
    SearchResult result;
    result.trials.reserve(space.iterations);

    for (std::size_t trial = 0; trial < space.iterations; ++trial) {
        TrainConfig cfg;
        cfg.learning_rate = space.learning_rates[uniform_below(rng, space.learning_rates.size())];
        cfg.batch_size = space.batch_sizes[uniform_below(rng, space.batch_sizes.size())];
        cfg.epochs = space.epoch_counts[uniform_below(rng, space.epoch_counts.size())];
        cfg.seed = derive_seed(seed, 0x5ea6c4, trial);

        const double score = kfold_score(samples, cfg, 5);
        result.trials.push_back({cfg, score});
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.trials.size(); ++i)
        if (result.trials[i].score < result.trials[best].score) best = i;
    result.best = result.trials[best].config;
    return result;
}

SplitIndices split_indices(std::size_t n, std::array<double, 3> fractions, std::uint64_t seed) {
    double sum = 0.0;
    for (double f : fractions) {
        if (f < 0.0) throw InvalidArgument("split fractions must be nonnegative");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("split fractions must sum to 1");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    deterministic_shuffle(order, rng);

    const auto nd = static_cast<double>(n);
    const auto cut1 = static_cast<std::size_t>(std::llround(fractions[0] * nd));
    const auto cut2 =
        static_cast<std::size_t>(std::llround((fractions[0] + fractions[1]) * nd));

    SplitIndices split;
    split.train.assign(order.begin(), order.begin() + cut1);
    split.validation.assign(order.begin() + cut1, order.begin() + cut2);
    split.test.assign(order.begin() + cut2, order.end());
    return split;
}

}  // namespace gwshm

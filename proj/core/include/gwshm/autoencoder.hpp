#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace gwshm {

enum class Activation { ReLU, Linear };

struct LayerSpec {
    std::size_t output_width = 0;
    bool trainable = true;
    Activation activation = Activation::ReLU;
};

// Fully-connected autoencoder. Non-trainable layers carry no parameters and
// apply their activation to the incoming vector unchanged. Weight matrices
// are row-major out x in.
struct DenseAutoencoder {
    std::size_t input_width = 0;
    std::vector<LayerSpec> layers;
    std::vector<std::vector<double>> weights;  // empty for non-trainable layers
    std::vector<std::vector<double>> biases;

    std::size_t layer_input_width(std::size_t layer) const;
    std::size_t parameter_count() const;
    std::vector<std::size_t> per_layer_parameter_counts() const;
    std::size_t max_width() const;
};

// The 16-16-32-64-64-64-32-16 stack (the 64-wide middle layer is an
// activation-only pass-through), 9696 trainable parameters. Weights start
// uniform in +-sqrt(6/(fan_in+fan_out)), biases at zero.
DenseAutoencoder build_model(std::uint64_t seed);

// Arbitrary topology for fixtures and experiments; same initialization.
DenseAutoencoder build_custom_model(std::size_t input_width, std::vector<LayerSpec> layers,
                                    std::uint64_t seed);

std::vector<double> forward(const DenseAutoencoder& model, std::span<const double> input);

double reconstruction_mse(std::span<const double> input, std::span<const double> reconstruction);

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t batch_size = 32;
    std::size_t epochs = 150;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
    std::uint64_t seed = 0;
};

// First-moment/second-moment optimizer over one flat parameter vector.
class AdamOptimizer {
public:
    AdamOptimizer(std::size_t parameter_count, double learning_rate, double beta1 = 0.9,
                  double beta2 = 0.999, double epsilon = 1e-7);

    void step(std::span<double> parameters, std::span<const double> gradients);

private:
    double learning_rate_;
    double beta1_;
    double beta2_;
    double epsilon_;
    std::uint64_t step_count_ = 0;
    std::vector<double> first_moment_;
    std::vector<double> second_moment_;
};

struct ModelGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

// Analytic d(mean reconstruction MSE)/d(parameters) over a batch; the same
// gradients the training loop feeds to the optimizer.
ModelGradients loss_gradients(const DenseAutoencoder& model,
                              const std::vector<std::vector<double>>& batch);

struct TrainResult {
    std::vector<double> loss_history;  // mean reconstruction MSE per epoch
};

// Mini-batch Adam on reconstruction MSE. Data are shuffled every epoch under
// cfg.seed; the last partial batch is trained on. Single-threaded and
// bit-deterministic for fixed seeds.
TrainResult train(DenseAutoencoder& model, const std::vector<std::vector<double>>& samples,
                  const TrainConfig& cfg);

double mean_reconstruction_mse(const DenseAutoencoder& model,
                               const std::vector<std::vector<double>>& samples);

// Mean validation reconstruction MSE across k folds; fold assignment and the
// per-fold model/training seeds all derive from cfg.seed.
double kfold_score(const std::vector<std::vector<double>>& samples, const TrainConfig& cfg,
                   std::size_t k = 5);

struct SearchSpace {
    std::vector<double> learning_rates = {0.001, 0.01, 0.1};
    std::vector<std::size_t> batch_sizes = {16, 28, 32, 64};
    std::vector<std::size_t> epoch_counts = {50, 100, 150, 200};
    std::size_t iterations = 10;
};

struct SearchTrial {
    TrainConfig config;
    double score = 0.0;  // mean validation reconstruction MSE
};

struct SearchResult {
    TrainConfig best;
    std::vector<SearchTrial> trials;
};

// Uniform sampling with replacement from the space, each trial scored by
// 5-fold cross-validation; lowest mean validation MSE wins (first on ties).
SearchResult random_search(const SearchSpace& space, const std::vector<std::vector<double>>& samples,
                           std::uint64_t seed);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

// Random disjoint partition of [0, n); subset sizes land within one element
// of the exact fractions.
SplitIndices split_indices(std::size_t n, std::array<double, 3> fractions, std::uint64_t seed);

}  // namespace gwshm

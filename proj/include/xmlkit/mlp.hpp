#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

enum class Activation { relu, sigmoid_act, tanh_act };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

// Fully connected feed-forward network with a single raw-logit output.
// The sigmoid lives inside the loss, not in the network.
class Network : public Predictor {
 public:
  struct Layer {
    std::vector<double> w;  // out x in, row-major
    std::vector<double> b;  // out
    std::size_t in = 0, out = 0;
  };

  std::vector<std::size_t> sizes;  // input, hidden..., 1
  std::vector<Layer> layers;
  Activation activation = Activation::relu;

  double forward(const std::vector<double>& x) const;
  // Forward pass retaining post-activation values per layer for backward.
  double forward_cached(const std::vector<double>& x,
                        std::vector<std::vector<double>>& activations) const;
  double predict_proba(const std::vector<double>& x) const override;

  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& params);
};

// He-style init for relu (std sqrt(2/fan_in)), Xavier-style otherwise;
// biases zero; deterministic per seed.
Network init_network(const std::vector<std::size_t>& sizes, Activation act,
                     std::uint64_t seed);

// Mean BCE over the batch in the fused-logit form
// max(z,0) - z*y + log(1 + exp(-|z|)).
double bce_with_logits(const std::vector<double>& logits, const std::vector<int>& labels);

// Gradients shaped like the network parameters.
struct Gradients {
  std::vector<Network::Layer> layers;
};

// Exact gradient of mean BCE-with-logits over the batch.
Gradients backward(const Network& n, const FeatureMatrix& x,
                   const std::vector<int>& y, const std::vector<std::size_t>& batch);

struct AdamState {
  std::vector<double> m;  // first moment, flattened
  std::vector<double> v;  // second moment, flattened
  std::size_t step = 0;
};

enum class OptimizerKind { gd, adam };

struct TrainConfig {
  std::size_t epochs = 200;
  double learning_rate = 0.001;
  std::size_t batch_size = 32;
  OptimizerKind optimizer = OptimizerKind::adam;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::uint64_t seed = 0;
  std::optional<double> loss_epsilon;  // optional early exit when loss <= value
};

// One optimizer update over flattened parameters.
void optimizer_step(std::vector<double>& params, const std::vector<double>& grads,
                    AdamState& state, const TrainConfig& cfg);

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> train_accuracy;
  std::vector<double> val_loss;
  std::vector<double> val_accuracy;
};

// Mini-batch training with a seeded per-epoch shuffle. When a validation
// set is given, the parameters with the best validation loss are returned.
std::pair<Network, TrainHistory> train_mlp(const Dataset& train, const TrainConfig& cfg,
                                           const std::vector<std::size_t>& hidden_sizes,
                                           Activation act,
                                           const Dataset* validation = nullptr);

// Central finite-difference check of backward over every parameter;
// returns the worst relative error (absolute when the denominator vanishes).
double gradient_check(Network& n, const FeatureMatrix& x, const std::vector<int>& y);

}  // namespace xmlkit

#pragma once

#include <cstdint>
#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

struct LimeConfig {
  std::size_t n_samples = 5000;
  double kernel_width = 0.0;        // <= 0 means 0.75 * sqrt(d)
  double perturbation_scale = 1.0;  // multiplier on per-column training std
  double ridge_lambda = 1e-3;
  std::size_t top_k = 10;
  std::uint64_t seed = 0;
};

struct LimeExplanation {
  double intercept = 0.0;
  std::vector<double> weights;
  std::vector<std::size_t> top_k;  // feature indices, |weight| descending
  double local_fidelity = 0.0;     // weighted R^2 of the surrogate
  double p_benign = 0.0;
  double p_malignant = 0.0;
};

// Per-column mean and standard deviation of the (scaled) training matrix,
// used to size the perturbation neighborhood.
struct TrainStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

TrainStats compute_train_stats(const FeatureMatrix& train);

// Gaussian perturbations around x; row 0 is x itself.
FeatureMatrix perturb(const std::vector<double>& x, const TrainStats& stats,
                      const LimeConfig& cfg);

// Exponential proximity kernel exp(-dist^2 / width^2).
double kernel_weight(const std::vector<double>& x, const std::vector<double>& z,
                     double width);

// Weighted ridge fit of model.predict_proba(z) against z on the
// perturbation sample.
LimeExplanation fit_surrogate(const Predictor& model, const std::vector<double>& x,
                              const TrainStats& stats, const LimeConfig& cfg);

}  // namespace xmlkit

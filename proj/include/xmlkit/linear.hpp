#pragma once

#include <cstdint>
#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

// Numerically stable logistic function, valid for the full double range.
double sigmoid(double z);

struct LinearTrainConfig {
  double learning_rate = 0.001;
  std::size_t epochs = 200;
  std::size_t batch_size = 0;  // 0 = full batch
  double l2_penalty = 0.0;
  std::uint64_t seed = 0;
};

class LogisticModel : public Predictor {
 public:
  std::vector<double> weights;
  double bias = 0.0;

  double predict_proba(const std::vector<double>& x) const override;
};

// Gradient-descent fit of L2-regularized logistic regression on BCE loss.
// batch_size 0 trains full batch (deterministic, order-invariant);
// a positive batch size trains stochastic mini-batches with a seeded
// per-epoch shuffle.
LogisticModel fit_logistic(const Dataset& train, const LinearTrainConfig& cfg);

// Mean BCE loss of the model on a dataset (plus L2 term when penalty > 0).
double logistic_loss(const LogisticModel& m, const Dataset& d, double l2_penalty = 0.0);

}  // namespace xmlkit

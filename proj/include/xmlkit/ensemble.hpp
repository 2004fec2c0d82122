#pragma once

#include <cstdint>
#include <vector>

#include "xmlkit/core.hpp"
#include "xmlkit/tree.hpp"

namespace xmlkit {

struct ForestConfig {
  std::size_t n_estimators = 30;
  TreeConfig tree;
  std::size_t features_per_split = 0;  // 0 = ceil(sqrt(cols)), SIZE_MAX-like "all" via cols
  bool all_features = false;           // true reproduces pure bagging
  std::uint64_t seed = 0;
};

class ForestModel : public Predictor {
 public:
  std::vector<TreeModel> trees;
  ForestConfig config;

  // Fraction of trees voting class 1 (leaf probability >= 0.5).
  double predict_proba(const std::vector<double>& x) const override;
};

struct GbtConfig {
  std::size_t n_rounds = 100;
  double learning_rate = 0.1;  // shrinkage
  TreeConfig tree{Criterion::variance, 3, 1};
};

class GbtModel : public Predictor {
 public:
  double initial_logit = 0.0;
  std::vector<TreeModel> trees;
  double shrinkage = 0.1;

  // sigmoid(initial_logit + shrinkage * sum of tree outputs)
  double predict_proba(const std::vector<double>& x) const override;
};

// n uniform draws with replacement from [0, n), deterministic per seed.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

ForestModel fit_forest(const Dataset& train, const ForestConfig& cfg);

// Plain gradient boosting on logistic loss: each round fits a regression
// tree to the residual y - sigmoid(logit) and adds it with shrinkage.
GbtModel fit_gbt(const Dataset& train, const GbtConfig& cfg);

}  // namespace xmlkit

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

enum class Criterion { gini, entropy, variance };

Criterion criterion_from_string(const std::string& s);
std::string to_string(Criterion c);

struct TreeConfig {
  Criterion criterion = Criterion::gini;
  std::size_t max_depth = 0;  // 0 = unlimited
  std::size_t min_samples_leaf = 1;
};

// Impurity of a two-class node from its label counts.
double impurity(std::size_t n0, std::size_t n1, Criterion c);

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // class-1 probability (classification) or mean (regression)
};

class TreeModel : public Predictor {
 public:
  std::vector<TreeNode> nodes;  // node 0 is the root
  std::vector<double> importance;
  std::size_t cols = 0;
  TreeConfig config;

  // Root-to-leaf descent; left branch taken when x[feature] <= threshold.
  double predict_value(const std::vector<double>& x) const;
  double predict_proba(const std::vector<double>& x) const override { return predict_value(x); }
};

// Exhaustive best split over candidate thresholds (midpoints between
// consecutive distinct sorted values per feature). Ties broken by lower
// feature index, then lower threshold. Empty when no split has positive
// gain with both children >= min_samples_leaf. candidate_features empty
// means all features are considered.
std::optional<Split> best_split(const FeatureMatrix& x, const std::vector<double>& targets,
                                const std::vector<std::size_t>& samples, const TreeConfig& cfg,
                                const std::vector<std::size_t>& candidate_features = {});

// Recursive CART fit. When feature_rng is non-null, each split draws
// features_per_split candidate features from it (random-forest mode).
TreeModel fit_tree(const FeatureMatrix& x, const std::vector<double>& targets,
                   const TreeConfig& cfg, Rng* feature_rng = nullptr,
                   std::size_t features_per_split = 0);

TreeModel fit_tree(const Dataset& train, const TreeConfig& cfg);

}  // namespace xmlkit

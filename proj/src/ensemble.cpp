#include "xmlkit/ensemble.hpp"

#include <cmath>

#include "xmlkit/linear.hpp"

namespace xmlkit {

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DataError("bootstrap needs n >= 1");
  Rng rng(seed);
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rng.uniform_index(n);
  return out;
}

ForestModel fit_forest(const Dataset& train, const ForestConfig& cfg) {
  if (train.size() == 0) throw DataError("cannot fit forest on empty dataset");
  if (cfg.n_estimators < 1) throw DataError("forest needs at least one estimator");

  std::size_t fps = cfg.all_features
                        ? 0
                        : (cfg.features_per_split > 0
                               ? cfg.features_per_split
                               : static_cast<std::size_t>(
                                     std::ceil(std::sqrt(static_cast<double>(train.x.cols)))));

  ForestModel m;
  m.config = cfg;
  m.trees.reserve(cfg.n_estimators);
  for (std::size_t t = 0; t < cfg.n_estimators; ++t) {
    std::uint64_t sub = derive_subseed(cfg.seed, t);
    auto idx = bootstrap_indices(train.size(), sub);
    Dataset sample = train.subset(idx);
    std::vector<double> targets(sample.y.labels.begin(), sample.y.labels.end());
    Rng feature_rng(derive_subseed(sub, 1));
    m.trees.push_back(fit_tree(sample.x, targets, cfg.tree,
                               fps > 0 ? &feature_rng : nullptr, fps));
  }
  return m;
}

double ForestModel::predict_proba(const std::vector<double>& x) const {
  std::size_t votes = 0;
  for (const auto& t : trees) votes += t.predict_value(x) >= 0.5 ? 1 : 0;
  return static_cast<double>(votes) / static_cast<double>(trees.size());
}

GbtModel fit_gbt(const Dataset& train, const GbtConfig& cfg) {
  std::size_t pos = 0;
  for (int y : train.y.labels) pos += static_cast<std::size_t>(y);
  if (pos == 0 || pos == train.size())
    throw DataError("gradient boosting needs both classes present");

  GbtModel m;
  m.shrinkage = cfg.learning_rate;
  double p = static_cast<double>(pos) / static_cast<double>(train.size());
  m.initial_logit = std::log(p / (1.0 - p));

  std::vector<double> logits(train.size(), m.initial_logit);
  std::vector<double> residual(train.size());
  TreeConfig tree_cfg = cfg.tree;
  tree_cfg.criterion = Criterion::variance;

  for (std::size_t round = 0; round < cfg.n_rounds; ++round) {
    for (std::size_t i = 0; i < train.size(); ++i)
      residual[i] = static_cast<double>(train.y.labels[i]) - sigmoid(logits[i]);
    TreeModel tree = fit_tree(train.x, residual, tree_cfg);
    for (std::size_t i = 0; i < train.size(); ++i)
      logits[i] += m.shrinkage * tree.predict_value(train.x.row(i));
    m.trees.push_back(std::move(tree));
  }
  return m;
}

double GbtModel::predict_proba(const std::vector<double>& x) const {
  double z = initial_logit;
  for (const auto& t : trees) z += shrinkage * t.predict_value(x);
  return sigmoid(z);
}

}  // namespace xmlkit

#include "xmlkit/presets.hpp"

namespace xmlkit {

using nlohmann::json;

ModelSpec default_model_spec(ModelFamily family) {
  ModelSpec spec;
  spec.family = family;
  switch (family) {
    case ModelFamily::logistic:
      spec.linear = {0.5, 2000, 0, 0.0, 0};
      break;
    case ModelFamily::sgd_logistic:
      spec.linear = {0.1, 200, 32, 0.0, 0};
      break;
    case ModelFamily::tree:
      // the paper's tuned parameters
      spec.tree = {Criterion::entropy, 10, 10};
      break;
    case ModelFamily::forest:
      spec.forest.n_estimators = 30;
      spec.forest.tree = {Criterion::gini, 0, 1};
      break;
    case ModelFamily::gbt:
      spec.gbt = {100, 0.1, {Criterion::variance, 3, 1}};
      break;
    case ModelFamily::knn:
      spec.knn_k = 4;
      break;
    case ModelFamily::mlp:
      spec.mlp = TrainConfig{};  // adam, lr 0.001, 200 epochs, batch 32
      spec.mlp_hidden = {30, 30};
      spec.mlp_activation = Activation::relu;
      break;
  }
  return spec;
}

GridSpec paper_dt_grid() {
  GridSpec g;
  g.scoring = Scoring::roc_auc;
  g.params = {
      {"criterion", {json("gini"), json("entropy")}},
      {"max_depth", {json(10), json(20), json(50), json(100), json(200)}},
      {"min_samples_leaf", {json(5), json(10), json(20), json(50), json(100)}},
  };
  return g;
}

GridSpec paper_rf_grid() {
  GridSpec g;
  g.scoring = Scoring::accuracy;
  g.params = {
      {"max_depth", {json(nullptr), json(10), json(20), json(50), json(100)}},
      {"n_estimators", {json(10), json(20), json(30), json(50), json(100)}},
      {"min_samples_leaf", {json(1), json(5), json(10), json(20), json(50)}},
  };
  return g;
}

void apply_preset(const std::string& name, ExperimentConfig& cfg) {
  if (name == "paper-ann") {
    cfg.spec = default_model_spec(ModelFamily::mlp);
    cfg.split_ratios = {0.7, 0.2, 0.1};
  } else if (name == "paper-knn-sweep") {
    cfg.spec = default_model_spec(ModelFamily::knn);
    cfg.split_ratios = {0.7, 0.3};
    cfg.knn_sweep_kmax = 20;
  } else if (name == "paper-dt-grid" || name == "paper-rf-grid") {
    cfg.spec = default_model_spec(name == "paper-dt-grid" ? ModelFamily::tree
                                                          : ModelFamily::forest);
    cfg.split_ratios = {0.7, 0.3};
  } else {
    throw DataError("unknown preset: " + name);
  }
}

}  // namespace xmlkit

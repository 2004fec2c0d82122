#pragma once

#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "xmlkit/core.hpp"
#include "xmlkit/dataset.hpp"
#include "xmlkit/ensemble.hpp"
#include "xmlkit/knn.hpp"
#include "xmlkit/linear.hpp"
#include "xmlkit/metrics.hpp"
#include "xmlkit/mlp.hpp"
#include "xmlkit/tree.hpp"

namespace xmlkit {

enum class ModelFamily { logistic, sgd_logistic, tree, forest, gbt, knn, mlp };

ModelFamily family_from_string(const std::string& s);
std::string to_string(ModelFamily f);

// One model request: family plus the family's configuration. Unused
// sub-configs are ignored.
struct ModelSpec {
  ModelFamily family = ModelFamily::logistic;
  LinearTrainConfig linear;
  TreeConfig tree{Criterion::gini, 0, 1};
  ForestConfig forest;
  GbtConfig gbt;
  std::size_t knn_k = 4;
  TrainConfig mlp;
  std::vector<std::size_t> mlp_hidden{30, 30};
  Activation mlp_activation = Activation::relu;
  std::uint64_t seed = 0;
};

struct TrainedModel {
  std::unique_ptr<Predictor> model;
  TrainHistory history;  // mlp only
  nlohmann::json params;
};

// Train one model on an already-scaled dataset.
TrainedModel train_model(const Dataset& train, const ModelSpec& spec,
                         const Dataset* validation = nullptr);

enum class Scoring { accuracy, roc_auc };

struct CvResult {
  std::vector<double> fold_scores;
  double mean = 0.0;
  double stddev = 0.0;
};

// Stratified k-fold cross-validation with a per-fold scaler (no leakage).
CvResult cross_validate(const Dataset& d, const ModelSpec& spec, std::size_t k,
                        std::uint64_t seed, Scoring scoring = Scoring::accuracy);

// Cartesian hyperparameter grid. Candidate values are JSON scalars so that
// numeric and string parameters mix freely.
struct GridSpec {
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> params;
  Scoring scoring = Scoring::accuracy;
};

struct GridResult {
  nlohmann::json best_params;
  double best_score = 0.0;
  nlohmann::json table;  // every cell with its params and score
};

GridResult grid_search(const Dataset& d, const ModelSpec& base, const GridSpec& grid,
                       std::size_t k, std::uint64_t seed);

enum class ExplainMode { none, shap_exact, shap_mc, lime };

struct ExperimentConfig {
  std::string data_path;
  ModelSpec spec;
  std::vector<double> split_ratios{0.7, 0.3};
  std::uint64_t seed = 0;
  std::size_t cv_k = 0;  // 0 disables cross-validation
  ExplainMode explain = ExplainMode::none;
  std::size_t explain_instances = 5;
  std::size_t shap_permutations = 200;
  std::size_t background_size = 100;
  std::size_t knn_sweep_kmax = 0;  // > 0 adds an accuracy-vs-k curve
};

// Full protocol: load, encode, stratified split, train-fit scaling, train,
// evaluate, optionally explain, assemble the report. All stochastic stages
// draw sub-seeds from the one master seed.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

// Same, but on a dataset already in memory (the CLI loads once).
nlohmann::json run_experiment(const Dataset& raw, const ExperimentConfig& cfg);

nlohmann::json metrics_to_json(const MetricsReport& m);
std::uint64_t dataset_fingerprint(const Dataset& d);

}  // namespace xmlkit

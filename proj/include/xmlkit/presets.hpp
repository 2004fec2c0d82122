#pragma once

#include <string>

#include "xmlkit/pipeline.hpp"

namespace xmlkit {

// Per-family training configuration used by the CLI and the experiment
// presets when the user does not override it.
ModelSpec default_model_spec(ModelFamily family);

// Named experiment presets:
//   paper-ann      7:2:1 split, MLP 2x30 relu, adam lr 0.001, 200 epochs
//   paper-dt-grid  decision-tree grid (criterion x depth x min leaf), roc-auc
//   paper-rf-grid  random-forest grid (depth x estimators x min leaf)
//   paper-knn-sweep  5-fold accuracy curve for k in 1..20
void apply_preset(const std::string& name, ExperimentConfig& cfg);

GridSpec paper_dt_grid();
GridSpec paper_rf_grid();

}  // namespace xmlkit

#pragma once

#include <cstdint>
#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

// Reference samples defining the value function's expectation for absent
// features (scaled space).
struct BackgroundSet {
  FeatureMatrix x;
};

struct Attribution {
  std::vector<double> phi;
  double base_value = 0.0;  // mean model output over background
  double fx = 0.0;          // model output at x
  std::string mode;         // "exact" or "permutation"
  std::size_t n_permutations = 0;
  std::vector<double> stderr_phi;  // permutation mode only
};

struct GlobalImportance {
  std::vector<double> mean_abs_phi;
  std::vector<std::size_t> ranking;  // feature indices, descending importance
};

// Marginal-expectation value function: mean prediction over background rows
// with the features in `subset` taken from x.
double value_function(const Predictor& model, const BackgroundSet& bg,
                      const std::vector<double>& x, const std::vector<bool>& subset);

// Exact Shapley values by weighted coalition enumeration; each of the 2^d
// subsets is evaluated once. Refuses d > 15.
Attribution shapley_exact(const Predictor& model, const BackgroundSet& bg,
                          const std::vector<double>& x);

// Monte Carlo estimate over random feature orderings. Additivity holds
// exactly per permutation by telescoping, hence in the mean.
Attribution shapley_permutation(const Predictor& model, const BackgroundSet& bg,
                                const std::vector<double>& x, std::size_t n_permutations,
                                std::uint64_t seed);

GlobalImportance global_importance(const std::vector<Attribution>& attributions);

}  // namespace xmlkit

#pragma once

#include <cstdint>
#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

double euclidean(const std::vector<double>& a, const std::vector<double>& b);

// K-nearest-neighbor classifier in the scaled feature space. Ties on the
// k-th distance are broken by lower training index; votes are weighted by
// inverse distance, and an exact-match neighbor dominates.
class KnnModel : public Predictor {
 public:
  KnnModel() = default;
  KnnModel(Dataset train, std::size_t k);

  double predict_proba(const std::vector<double>& x) const override;

  const Dataset& training_data() const { return train_; }
  std::size_t k() const { return k_; }

 private:
  Dataset train_;
  std::size_t k_ = 1;
};

struct KSweepResult {
  std::size_t best_k = 1;
  std::vector<double> accuracy_per_k;  // index 0 holds k = 1
};

// Mean stratified-CV accuracy for each k in [1, k_max]; best_k is the
// argmax with ties going to the smaller k.
KSweepResult sweep_k(const Dataset& d, std::size_t k_max, std::size_t folds,
                     std::uint64_t seed);

}  // namespace xmlkit

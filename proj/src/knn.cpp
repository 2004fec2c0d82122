#include "xmlkit/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xmlkit/dataset.hpp"

namespace xmlkit {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DataError("euclidean: dimension mismatch");
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

namespace {

constexpr double kDistanceEps = 1e-12;

// Neighbors sorted by (distance, training index).
std::vector<std::pair<double, std::size_t>> sorted_neighbors(const FeatureMatrix& train,
                                                             const std::vector<double>& x) {
  std::vector<std::pair<double, std::size_t>> nb(train.rows);
  for (std::size_t i = 0; i < train.rows; ++i) {
    double ss = 0.0;
    for (std::size_t c = 0; c < train.cols; ++c) {
      double d = x[c] - train.at(i, c);
      ss += d * d;
    }
    nb[i] = {std::sqrt(ss), i};
  }
  std::sort(nb.begin(), nb.end());
  return nb;
}

double vote(const std::vector<std::pair<double, std::size_t>>& nb,
            const std::vector<int>& labels, std::size_t k) {
  // Exact matches dominate.
  std::size_t zero = 0, zero_pos = 0;
  for (std::size_t i = 0; i < k && nb[i].first == 0.0; ++i) {
    ++zero;
    zero_pos += static_cast<std::size_t>(labels[nb[i].second]);
  }
  if (zero > 0) return static_cast<double>(zero_pos) / static_cast<double>(zero);

  double wsum = 0.0, wpos = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double w = 1.0 / (nb[i].first + kDistanceEps);
    wsum += w;
    if (labels[nb[i].second] == 1) wpos += w;
  }
  return wpos / wsum;
}

}  // namespace

KnnModel::KnnModel(Dataset train, std::size_t k) : train_(std::move(train)), k_(k) {
  if (k_ < 1 || k_ > train_.size())
    throw DataError("knn: k must be in [1, training size]");
}

double KnnModel::predict_proba(const std::vector<double>& x) const {
  if (x.size() != train_.x.cols) throw DataError("knn: dimension mismatch");
  auto nb = sorted_neighbors(train_.x, x);
  return vote(nb, train_.y.labels, k_);
}

KSweepResult sweep_k(const Dataset& d, std::size_t k_max, std::size_t folds,
                     std::uint64_t seed) {
  // the sweep owns a derived stream so its fold assignment is decoupled
  // from any other stage the caller seeds with the same value
  FoldAssignment fa = stratified_kfold(d.y, folds, derive_subseed(seed, 0));
  std::vector<std::size_t> correct(k_max, 0);
  std::size_t evaluated = 0;

  for (std::size_t fold = 0; fold < folds; ++fold) {
    Dataset train = d.subset(fa.train_indices(fold));
    Dataset test = d.subset(fa.test_indices(fold));
    Scaler scaler = fit_minmax(train.x);
    train.x = apply_minmax(scaler, train.x);
    test.x = apply_minmax(scaler, test.x);
    if (k_max > train.size()) throw DataError("sweep_k: k_max exceeds fold training size");

    for (std::size_t i = 0; i < test.size(); ++i) {
      auto nb = sorted_neighbors(train.x, test.x.row(i));
      for (std::size_t k = 1; k <= k_max; ++k) {
        int pred = vote(nb, train.y.labels, k) >= 0.5 ? 1 : 0;
        if (pred == test.y.labels[i]) ++correct[k - 1];
      }
      ++evaluated;
    }
  }

  KSweepResult r;
  r.accuracy_per_k.resize(k_max);
  for (std::size_t k = 0; k < k_max; ++k)
    r.accuracy_per_k[k] = static_cast<double>(correct[k]) / static_cast<double>(evaluated);
  r.best_k = 1 + static_cast<std::size_t>(
                     std::max_element(r.accuracy_per_k.begin(), r.accuracy_per_k.end()) -
                     r.accuracy_per_k.begin());
  return r;
}

}  // namespace xmlkit

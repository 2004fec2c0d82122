#include "xmlkit/linear.hpp"

#include <cmath>
#include <numeric>

namespace xmlkit {

double sigmoid(double z) {
  if (z >= 0.0) {
    double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

double LogisticModel::predict_proba(const std::vector<double>& x) const {
  if (x.size() != weights.size())
    throw DataError("logistic model expects " + std::to_string(weights.size()) +
                    " features, got " + std::to_string(x.size()));
  double z = bias;
  for (std::size_t i = 0; i < x.size(); ++i) z += weights[i] * x[i];
  return sigmoid(z);
}

namespace {

// BCE in the fused logit form: max(z,0) - z*y + log(1 + exp(-|z|)).
double bce_logit(double z, int y) {
  return std::max(z, 0.0) - z * static_cast<double>(y) + std::log1p(std::exp(-std::abs(z)));
}

// full_batch uses exact summation so the gradient is invariant to row order.
void gradient_step(LogisticModel& m, const Dataset& d,
                   const std::vector<std::size_t>& batch, const LinearTrainConfig& cfg,
                   bool full_batch) {
  const std::size_t cols = d.x.cols;
  std::vector<double> gw(cols, 0.0);
  double gb = 0.0;
  std::vector<double> errs(batch.size());
  for (std::size_t bi = 0; bi < batch.size(); ++bi) {
    std::size_t i = batch[bi];
    double z = m.bias;
    for (std::size_t c = 0; c < cols; ++c) z += m.weights[c] * d.x.at(i, c);
    errs[bi] = sigmoid(z) - static_cast<double>(d.y.labels[i]);
  }
  if (full_batch) {
    std::vector<double> terms(batch.size());
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t bi = 0; bi < batch.size(); ++bi)
        terms[bi] = errs[bi] * d.x.at(batch[bi], c);
      gw[c] = exact_sum(terms);
    }
    gb = exact_sum(errs);
  } else {
    for (std::size_t bi = 0; bi < batch.size(); ++bi) {
      std::size_t i = batch[bi];
      for (std::size_t c = 0; c < cols; ++c) gw[c] += errs[bi] * d.x.at(i, c);
      gb += errs[bi];
    }
  }
  double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t c = 0; c < cols; ++c) {
    double g = gw[c] * inv + cfg.l2_penalty * m.weights[c];
    m.weights[c] -= cfg.learning_rate * g;
  }
  m.bias -= cfg.learning_rate * gb * inv;
}

}  // namespace

double logistic_loss(const LogisticModel& m, const Dataset& d, double l2_penalty) {
  double loss = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double z = m.bias;
    for (std::size_t c = 0; c < d.x.cols; ++c) z += m.weights[c] * d.x.at(i, c);
    loss += bce_logit(z, d.y.labels[i]);
  }
  loss /= static_cast<double>(d.size());
  if (l2_penalty > 0.0) {
    double w2 = 0.0;
    for (double w : m.weights) w2 += w * w;
    loss += 0.5 * l2_penalty * w2;
  }
  return loss;
}

LogisticModel fit_logistic(const Dataset& train, const LinearTrainConfig& cfg) {
  if (train.size() == 0) throw DataError("cannot fit logistic model on empty dataset");
  LogisticModel m;
  m.weights.assign(train.x.cols, 0.0);

  std::vector<std::size_t> indices(train.size());
  std::iota(indices.begin(), indices.end(), 0);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.batch_size == 0) {
      gradient_step(m, train, indices, cfg, true);
    } else {
      Rng rng(derive_subseed(cfg.seed, epoch));
      rng.shuffle(indices);
      for (std::size_t start = 0; start < indices.size(); start += cfg.batch_size) {
        std::size_t end = std::min(start + cfg.batch_size, indices.size());
        std::vector<std::size_t> batch(indices.begin() + static_cast<std::ptrdiff_t>(start),
                                       indices.begin() + static_cast<std::ptrdiff_t>(end));
        gradient_step(m, train, batch, cfg, false);
      }
    }
    for (double w : m.weights)
      if (!std::isfinite(w))
        throw NumericError("logistic training diverged at epoch " + std::to_string(epoch));
  }
  return m;
}

}  // namespace xmlkit

#include "xmlkit/lime.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "xmlkit/knn.hpp"

namespace xmlkit {

TrainStats compute_train_stats(const FeatureMatrix& train) {
  TrainStats s;
  s.mean.assign(train.cols, 0.0);
  s.stddev.assign(train.cols, 0.0);
  for (std::size_t r = 0; r < train.rows; ++r)
    for (std::size_t c = 0; c < train.cols; ++c) s.mean[c] += train.at(r, c);
  for (double& m : s.mean) m /= static_cast<double>(train.rows);
  for (std::size_t r = 0; r < train.rows; ++r)
    for (std::size_t c = 0; c < train.cols; ++c) {
      double d = train.at(r, c) - s.mean[c];
      s.stddev[c] += d * d;
    }
  for (double& v : s.stddev) v = std::sqrt(v / static_cast<double>(train.rows));
  return s;
}

FeatureMatrix perturb(const std::vector<double>& x, const TrainStats& stats,
                      const LimeConfig& cfg) {
  if (x.size() != stats.stddev.size()) throw DataError("perturb: dimension mismatch");
  FeatureMatrix out;
  out.rows = cfg.n_samples;
  out.cols = x.size();
  out.values.reserve(out.rows * out.cols);
  Rng rng(cfg.seed);
  for (std::size_t r = 0; r < cfg.n_samples; ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) {
      double v = x[c];
      if (r > 0)  // row 0 is the instance itself
        v += cfg.perturbation_scale * stats.stddev[c] * rng.normal();
      out.values.push_back(v);
    }
  }
  return out;
}

double kernel_weight(const std::vector<double>& x, const std::vector<double>& z,
                     double width) {
  if (width <= 0.0) throw DataError("kernel width must be positive");
  double d = euclidean(x, z);
  return std::exp(-d * d / (width * width));
}

LimeExplanation fit_surrogate(const Predictor& model, const std::vector<double>& x,
                              const TrainStats& stats, const LimeConfig& cfg) {
  const std::size_t d = x.size();
  const double width = cfg.kernel_width > 0.0
                           ? cfg.kernel_width
                           : 0.75 * std::sqrt(static_cast<double>(d));

  FeatureMatrix z = perturb(x, stats, cfg);
  const std::size_t n = z.rows;

  Eigen::MatrixXd design(n, d + 1);  // column 0 = intercept
  Eigen::VectorXd target(n), w(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row = z.row(r);
    design(static_cast<Eigen::Index>(r), 0) = 1.0;
    for (std::size_t c = 0; c < d; ++c)
      design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c + 1)) = row[c];
    target(static_cast<Eigen::Index>(r)) = model.predict_proba(row);
    w(static_cast<Eigen::Index>(r)) = kernel_weight(x, row, width);
  }

  // Weighted ridge normal equations; intercept unpenalized.
  Eigen::MatrixXd xtw = design.transpose() * w.asDiagonal();
  Eigen::MatrixXd a = xtw * design;
  for (std::size_t c = 1; c <= d; ++c)
    a(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) += cfg.ridge_lambda;
  Eigen::VectorXd rhs = xtw * target;
  Eigen::LDLT<Eigen::MatrixXd> solver(a);
  Eigen::VectorXd beta = solver.solve(rhs);
  double residual = (a * beta - rhs).norm();
  if (solver.info() != Eigen::Success || !beta.allFinite() ||
      residual > 1e-6 * std::max(1.0, rhs.norm()))
    throw NumericError("singular surrogate normal equations; use ridge_lambda > 0");

  LimeExplanation ex;
  ex.intercept = beta(0);
  ex.weights.resize(d);
  for (std::size_t c = 0; c < d; ++c) ex.weights[c] = beta(static_cast<Eigen::Index>(c + 1));

  // Weighted R^2 against the model, 0 under zero target variance.
  double wsum = w.sum();
  double ybar = (w.array() * target.array()).sum() / wsum;
  Eigen::VectorXd fitted = design * beta;
  double ss_res = (w.array() * (target - fitted).array().square()).sum();
  double ss_tot = (w.array() * (target.array() - ybar).square()).sum();
  // zero variance up to rounding (constant target) reports 0, not a blow-up
  double tiny = 1e-12 * wsum * (1.0 + ybar * ybar);
  ex.local_fidelity = ss_tot > tiny ? 1.0 - ss_res / ss_tot : 0.0;

  ex.p_malignant = model.predict_proba(x);
  ex.p_benign = 1.0 - ex.p_malignant;

  ex.top_k.resize(d);
  std::iota(ex.top_k.begin(), ex.top_k.end(), 0);
  std::stable_sort(ex.top_k.begin(), ex.top_k.end(), [&](std::size_t a_, std::size_t b_) {
    return std::abs(ex.weights[a_]) > std::abs(ex.weights[b_]);
  });
  if (ex.top_k.size() > cfg.top_k) ex.top_k.resize(cfg.top_k);
  return ex;
}

}  // namespace xmlkit

#include "xmlkit/core.hpp"

#include <cmath>

namespace xmlkit {

double Rng::normal() {
  // Box-Muller; discard the second variate.
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double exact_sum(const std::vector<double>& values) {
  // Shewchuk's growing expansion of exact partial sums.
  std::vector<double> partials;
  for (double x : values) {
    std::size_t used = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      double hi = x + y;
      double lo = y - (hi - x);
      if (lo != 0.0) partials[used++] = lo;
      x = hi;
    }
    partials.resize(used);
    partials.push_back(x);
  }
  double total = 0.0;
  for (double p : partials) total += p;
  return total;
}

void FeatureMatrix::validate() const {
  if (rows < 1 || cols < 1) throw DataError("feature matrix must be non-empty");
  if (values.size() != rows * cols) throw DataError("feature matrix storage size mismatch");
  if (!feature_names.empty() && feature_names.size() != cols)
    throw DataError("feature name count does not match column count");
  for (double v : values)
    if (!std::isfinite(v)) throw DataError("feature matrix contains non-finite value");
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.x.rows = indices.size();
  out.x.cols = x.cols;
  out.x.feature_names = x.feature_names;
  out.x.values.reserve(indices.size() * x.cols);
  out.y.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    for (std::size_t c = 0; c < x.cols; ++c) out.x.values.push_back(x.at(i, c));
    out.y.labels.push_back(y.labels[i]);
  }
  return out;
}

}  // namespace xmlkit

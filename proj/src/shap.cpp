#include "xmlkit/shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace xmlkit {

double value_function(const Predictor& model, const BackgroundSet& bg,
                      const std::vector<double>& x, const std::vector<bool>& subset) {
  std::vector<double> composite(x.size());
  double sum = 0.0;
  for (std::size_t r = 0; r < bg.x.rows; ++r) {
    for (std::size_t c = 0; c < x.size(); ++c)
      composite[c] = subset[c] ? x[c] : bg.x.at(r, c);
    sum += model.predict_proba(composite);
  }
  return sum / static_cast<double>(bg.x.rows);
}

Attribution shapley_exact(const Predictor& model, const BackgroundSet& bg,
                          const std::vector<double>& x) {
  const std::size_t d = x.size();
  if (d > 15)
    throw DataError("shapley_exact limited to 15 features (2^d cost); use permutation mode");
  if (bg.x.cols != d) throw DataError("background column count mismatch");

  // Evaluate every coalition once, keyed by bitmask.
  const std::size_t n_subsets = std::size_t{1} << d;
  std::vector<double> value(n_subsets);
  std::vector<bool> subset(d);
  for (std::size_t mask = 0; mask < n_subsets; ++mask) {
    for (std::size_t c = 0; c < d; ++c) subset[c] = (mask >> c) & 1;
    value[mask] = value_function(model, bg, x, subset);
  }

  // Coalition weight |S|! (d-|S|-1)! / d!
  std::vector<double> log_fact(d + 1, 0.0);
  for (std::size_t i = 2; i <= d; ++i) log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));
  auto weight = [&](std::size_t s) {
    return std::exp(log_fact[s] + log_fact[d - s - 1] - log_fact[d]);
  };

  Attribution a;
  a.mode = "exact";
  a.phi.assign(d, 0.0);
  for (std::size_t mask = 0; mask < n_subsets; ++mask) {
    std::size_t s = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t i = 0; i < d; ++i) {
      if ((mask >> i) & 1) continue;
      a.phi[i] += weight(s) * (value[mask | (std::size_t{1} << i)] - value[mask]);
    }
  }
  a.base_value = value[0];
  a.fx = value[n_subsets - 1];
  return a;
}

Attribution shapley_permutation(const Predictor& model, const BackgroundSet& bg,
                                const std::vector<double>& x, std::size_t n_permutations,
                                std::uint64_t seed) {
  const std::size_t d = x.size();
  if (n_permutations < 1) throw DataError("need at least one permutation");
  if (bg.x.cols != d) throw DataError("background column count mismatch");

  std::vector<bool> subset(d, false);
  const double base = value_function(model, bg, x, subset);

  std::vector<double> sum(d, 0.0), sumsq(d, 0.0);
  std::vector<std::size_t> order(d);
  for (std::size_t p = 0; p < n_permutations; ++p) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_subseed(seed, p));
    rng.shuffle(order);
    std::fill(subset.begin(), subset.end(), false);
    double prev = base;
    for (std::size_t i : order) {
      subset[i] = true;
      double cur = value_function(model, bg, x, subset);
      double gain = cur - prev;
      sum[i] += gain;
      sumsq[i] += gain * gain;
      prev = cur;
    }
  }

  Attribution a;
  a.mode = "permutation";
  a.n_permutations = n_permutations;
  a.base_value = base;
  a.phi.resize(d);
  a.stderr_phi.assign(d, 0.0);
  double np = static_cast<double>(n_permutations);
  for (std::size_t i = 0; i < d; ++i) {
    a.phi[i] = sum[i] / np;
    if (n_permutations > 1) {
      double var = (sumsq[i] - sum[i] * sum[i] / np) / (np - 1.0);
      a.stderr_phi[i] = std::sqrt(std::max(var, 0.0) / np);
    }
  }
  std::fill(subset.begin(), subset.end(), true);
  a.fx = value_function(model, bg, x, subset);
  return a;
}

GlobalImportance global_importance(const std::vector<Attribution>& attributions) {
  if (attributions.empty()) throw DataError("global_importance needs attributions");
  const std::size_t d = attributions.front().phi.size();
  GlobalImportance gi;
  gi.mean_abs_phi.assign(d, 0.0);
  for (const auto& a : attributions) {
    if (a.phi.size() != d) throw DataError("attribution dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) gi.mean_abs_phi[i] += std::abs(a.phi[i]);
  }
  for (double& v : gi.mean_abs_phi) v /= static_cast<double>(attributions.size());
  gi.ranking.resize(d);
  std::iota(gi.ranking.begin(), gi.ranking.end(), 0);
  std::stable_sort(gi.ranking.begin(), gi.ranking.end(), [&](std::size_t a, std::size_t b) {
    return gi.mean_abs_phi[a] > gi.mean_abs_phi[b];
  });
  return gi;
}

}  // namespace xmlkit

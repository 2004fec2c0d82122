#include "xmlkit/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xmlkit {

Criterion criterion_from_string(const std::string& s) {
  if (s == "gini") return Criterion::gini;
  if (s == "entropy") return Criterion::entropy;
  if (s == "variance") return Criterion::variance;
  throw DataError("unknown criterion: " + s);
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::gini: return "gini";
    case Criterion::entropy: return "entropy";
    default: return "variance";
  }
}

double impurity(std::size_t n0, std::size_t n1, Criterion c) {
  double n = static_cast<double>(n0 + n1);
  double p0 = static_cast<double>(n0) / n;
  double p1 = static_cast<double>(n1) / n;
  if (c == Criterion::gini) return 1.0 - p0 * p0 - p1 * p1;
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

namespace {

constexpr double kGainEps = 1e-12;

struct SortedFeature {
  std::vector<double> vals;
  std::vector<double> tgts;
};

// Impurity of a target multiset under the node criterion. For variance mode
// targets are arbitrary reals and impurity is the biased variance; for
// gini/entropy targets are 0/1.
double node_impurity(const std::vector<double>& t, Criterion c) {
  if (c == Criterion::variance) {
    double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
    double ss = 0.0;
    for (double v : t) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(t.size());
  }
  std::size_t n1 = 0;
  for (double v : t) n1 += v >= 0.5 ? 1 : 0;
  return impurity(t.size() - n1, n1, c);
}

}  // namespace

std::optional<Split> best_split(const FeatureMatrix& x, const std::vector<double>& targets,
                                const std::vector<std::size_t>& samples, const TreeConfig& cfg,
                                const std::vector<std::size_t>& candidate_features) {
  const std::size_t n = samples.size();
  if (n < 2) return std::nullopt;
  const bool regression = cfg.criterion == Criterion::variance;

  std::vector<double> node_targets(n);
  for (std::size_t i = 0; i < n; ++i) node_targets[i] = targets[samples[i]];
  const double parent = node_impurity(node_targets, cfg.criterion);

  std::vector<std::size_t> features;
  if (candidate_features.empty()) {
    features.resize(x.cols);
    std::iota(features.begin(), features.end(), 0);
  } else {
    features = candidate_features;
    std::sort(features.begin(), features.end());
  }

  std::optional<Split> best;
  std::vector<std::pair<double, double>> pairs(n);  // (value, target)
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < n; ++i) pairs[i] = {x.at(samples[i], f), targets[samples[i]]};
    std::sort(pairs.begin(), pairs.end());

    // Left-prefix statistics; split after position i (1-based left size).
    double lsum = 0.0, lsumsq = 0.0;
    double tsum = 0.0, tsumsq = 0.0;
    std::size_t l1 = 0, t1 = 0;
    for (auto& [v, t] : pairs) {
      tsum += t;
      tsumsq += t * t;
      t1 += t >= 0.5 ? 1 : 0;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double t = pairs[i].second;
      lsum += t;
      lsumsq += t * t;
      l1 += t >= 0.5 ? 1 : 0;
      if (pairs[i].first == pairs[i + 1].first) continue;  // no boundary here
      std::size_t nl = i + 1, nr = n - nl;
      if (nl < cfg.min_samples_leaf || nr < cfg.min_samples_leaf) continue;

      double imp_l, imp_r;
      if (regression) {
        imp_l = lsumsq / static_cast<double>(nl) -
                (lsum / static_cast<double>(nl)) * (lsum / static_cast<double>(nl));
        double rsum = tsum - lsum, rsumsq = tsumsq - lsumsq;
        imp_r = rsumsq / static_cast<double>(nr) -
                (rsum / static_cast<double>(nr)) * (rsum / static_cast<double>(nr));
      } else {
        imp_l = impurity(nl - l1, l1, cfg.criterion);
        imp_r = impurity(nr - (t1 - l1), t1 - l1, cfg.criterion);
      }
      double gain = parent - (static_cast<double>(nl) * imp_l + static_cast<double>(nr) * imp_r) /
                                 static_cast<double>(n);
      if (gain > kGainEps && (!best || gain > best->gain + kGainEps)) {
        best = Split{f, 0.5 * (pairs[i].first + pairs[i + 1].first), gain};
      }
    }
  }
  return best;
}

namespace {

struct TreeBuilder {
  const FeatureMatrix& x;
  const std::vector<double>& targets;
  const TreeConfig& cfg;
  Rng* feature_rng;
  std::size_t features_per_split;
  std::size_t total_samples;
  TreeModel model;

  int build(std::vector<std::size_t>& samples, std::size_t depth) {
    double mean = 0.0;
    for (std::size_t i : samples) mean += targets[i];
    mean /= static_cast<double>(samples.size());

    int id = static_cast<int>(model.nodes.size());
    model.nodes.push_back(TreeNode{-1, 0.0, -1, -1, mean});

    if (cfg.max_depth != 0 && depth >= cfg.max_depth) return id;
    if (samples.size() < 2 * cfg.min_samples_leaf || samples.size() < 2) return id;

    std::vector<std::size_t> candidates;
    if (feature_rng && features_per_split > 0 && features_per_split < x.cols) {
      // sample distinct features without replacement
      std::vector<std::size_t> pool(x.cols);
      std::iota(pool.begin(), pool.end(), 0);
      for (std::size_t i = 0; i < features_per_split; ++i) {
        std::size_t j = i + feature_rng->uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
        candidates.push_back(pool[i]);
      }
    }
    auto split = best_split(x, targets, samples, cfg, candidates);
    if (!split) return id;

    model.importance[split->feature] +=
        static_cast<double>(samples.size()) / static_cast<double>(total_samples) * split->gain;

    std::vector<std::size_t> left, right;
    for (std::size_t i : samples)
      (x.at(i, split->feature) <= split->threshold ? left : right).push_back(i);
    samples.clear();
    samples.shrink_to_fit();

    model.nodes[static_cast<std::size_t>(id)].feature = static_cast<int>(split->feature);
    model.nodes[static_cast<std::size_t>(id)].threshold = split->threshold;
    int l = build(left, depth + 1);
    int r = build(right, depth + 1);
    model.nodes[static_cast<std::size_t>(id)].left = l;
    model.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }
};

}  // namespace

TreeModel fit_tree(const FeatureMatrix& x, const std::vector<double>& targets,
                   const TreeConfig& cfg, Rng* feature_rng, std::size_t features_per_split) {
  if (x.rows == 0) throw DataError("cannot fit tree on empty data");
  if (x.rows != targets.size()) throw DataError("target length mismatch");

  TreeBuilder b{x, targets, cfg, feature_rng, features_per_split, x.rows, {}};
  b.model.cols = x.cols;
  b.model.config = cfg;
  b.model.importance.assign(x.cols, 0.0);
  std::vector<std::size_t> all(x.rows);
  std::iota(all.begin(), all.end(), 0);
  b.build(all, 0);

  double total = std::accumulate(b.model.importance.begin(), b.model.importance.end(), 0.0);
  if (total > 0.0)
    for (double& v : b.model.importance) v /= total;
  return std::move(b.model);
}

TreeModel fit_tree(const Dataset& train, const TreeConfig& cfg) {
  std::vector<double> targets(train.y.labels.begin(), train.y.labels.end());
  return fit_tree(train.x, targets, cfg);
}

double TreeModel::predict_value(const std::vector<double>& x) const {
  if (x.size() != cols)
    throw DataError("tree expects " + std::to_string(cols) + " features, got " +
                    std::to_string(x.size()));
  int id = 0;
  while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<std::size_t>(id)];
    id = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(id)].value;
}

}  // namespace xmlkit

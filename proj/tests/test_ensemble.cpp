#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "xmlkit/dataset.hpp"
#include "xmlkit/ensemble.hpp"
#include "xmlkit/linear.hpp"

using namespace xmlkit;

namespace {

Dataset scaled_wdbc() {
  Dataset d = load_wdbc_csv(WDBC_CSV_PATH);
  d.x = apply_minmax(fit_minmax(d.x), d.x);
  return d;
}

}  // namespace

TEST_CASE("bootstrap basics") {
  CHECK(bootstrap_indices(1, 4) == std::vector<std::size_t>{0});
  CHECK(bootstrap_indices(100, 9) == bootstrap_indices(100, 9));
  CHECK_THROWS_AS(bootstrap_indices(0, 1), DataError);
}

TEST_CASE("bootstrap coverage near 1 - 1/e") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto idx = bootstrap_indices(1000, seed);
    CHECK(idx.size() == 1000);
    std::set<std::size_t> distinct(idx.begin(), idx.end());
    double frac = static_cast<double>(distinct.size()) / 1000.0;
    CHECK(frac == doctest::Approx(1.0 - 1.0 / std::exp(1.0)).epsilon(0.08));
  }
}

TEST_CASE("single-tree all-feature forest equals its tree") {
  Dataset d = scaled_wdbc();
  ForestConfig cfg;
  cfg.n_estimators = 1;
  cfg.all_features = true;
  cfg.tree = {Criterion::gini, 0, 1};
  cfg.seed = 3;
  ForestModel f = fit_forest(d, cfg);
  REQUIRE(f.trees.size() == 1);
  Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(30);
    for (double& v : x) v = rng.uniform();
    int tree_vote = f.trees[0].predict_value(x) >= 0.5 ? 1 : 0;
    CHECK(f.predict_proba(x) == static_cast<double>(tree_vote));
  }
}

TEST_CASE("forest vote fraction and tie rule") {
  // hand-built forest of constant-leaf trees
  auto leaf_tree = [](double p) {
    TreeModel t;
    t.cols = 1;
    t.nodes = {TreeNode{-1, 0, -1, -1, p}};
    return t;
  };
  ForestModel f;
  f.trees = {leaf_tree(0.9), leaf_tree(0.8), leaf_tree(0.1)};
  CHECK(f.predict_proba({0.0}) == doctest::Approx(2.0 / 3.0));
  CHECK(f.predict({0.0}) == 1);

  ForestModel g;
  g.trees = {leaf_tree(0.9), leaf_tree(0.1)};
  CHECK(g.predict_proba({0.0}) == 0.5);
  CHECK(g.predict({0.0}) == 1);  // ties vote malignant
}

TEST_CASE("forest prediction matches explicit vote tally") {
  Dataset d = scaled_wdbc();
  ForestConfig cfg;
  cfg.n_estimators = 10;
  cfg.seed = 5;
  ForestModel f = fit_forest(d, cfg);
  Rng rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(30);
    for (double& v : x) v = rng.uniform();
    std::size_t votes = 0;
    for (const auto& t : f.trees) votes += t.predict_value(x) >= 0.5 ? 1 : 0;
    CHECK(f.predict_proba(x) == static_cast<double>(votes) / 10.0);
  }
}

TEST_CASE("forest determinism per seed") {
  Dataset d = scaled_wdbc();
  ForestConfig cfg;
  cfg.n_estimators = 5;
  cfg.seed = 21;
  ForestModel a = fit_forest(d, cfg);
  ForestModel b = fit_forest(d, cfg);
  Rng rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(30);
    for (double& v : x) v = rng.uniform();
    CHECK(a.predict_proba(x) == b.predict_proba(x));
  }
}

TEST_CASE("gbt zero rounds predicts base rate") {
  Dataset d;
  d.x = {4, 1, {0, 1, 2, 3}, {}};
  d.y.labels = {1, 0, 0, 0};
  GbtModel m = fit_gbt(d, {0, 0.1, {Criterion::variance, 3, 1}});
  CHECK(m.trees.empty());
  CHECK(m.predict_proba({5.0}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(m.predict_proba({-1.0}) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("gbt rejects single-class data") {
  Dataset d;
  d.x = {2, 1, {0, 1}, {}};
  d.y.labels = {1, 1};
  CHECK_THROWS_AS(fit_gbt(d, GbtConfig{}), DataError);
}

TEST_CASE("gbt drives separable training error to zero") {
  Dataset d;
  d.x = {10, 1, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {}};
  d.y.labels = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  GbtModel m = fit_gbt(d, {50, 0.1, {Criterion::variance, 2, 1}});
  for (std::size_t i = 0; i < 10; ++i)
    CHECK(m.predict(d.x.row(i)) == d.y.labels[i]);
}

TEST_CASE("gbt prediction matches term-by-term accumulation") {
  Dataset d = scaled_wdbc();
  GbtModel m = fit_gbt(d, {20, 0.1, {Criterion::variance, 3, 1}});
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(30);
    for (double& v : x) v = rng.uniform();
    double z = m.initial_logit;
    for (const auto& t : m.trees) z += m.shrinkage * t.predict_value(x);
    CHECK(m.predict_proba(x) == sigmoid(z));
  }
}

TEST_CASE("gbt training loss monotone non-increasing") {
  Dataset d = scaled_wdbc();
  GbtConfig cfg{40, 0.3, {Criterion::variance, 3, 1}};
  GbtModel m = fit_gbt(d, cfg);

  // replay the additive model round by round
  std::vector<double> logits(d.size(), m.initial_logit);
  auto loss = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      double z = logits[i];
      s += std::max(z, 0.0) - z * d.y.labels[i] + std::log1p(std::exp(-std::abs(z)));
    }
    return s / static_cast<double>(d.size());
  };
  double prev = loss();
  for (const auto& t : m.trees) {
    for (std::size_t i = 0; i < d.size(); ++i)
      logits[i] += m.shrinkage * t.predict_value(d.x.row(i));
    double cur = loss();
    CHECK(cur <= prev + 1e-9);
    prev = cur;
  }
}

TEST_CASE("out-of-bag style check: big forest beats its first tree") {
  Dataset raw = load_wdbc_csv(WDBC_CSV_PATH);
  std::size_t wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SplitSpec spec{{0.7, 0.3}, seed};
    auto parts = stratified_split(raw, spec);
    Dataset train = parts[0], test = parts[1];
    Scaler s = fit_minmax(train.x);
    train.x = apply_minmax(s, train.x);
    test.x = apply_minmax(s, test.x);

    ForestConfig cfg;
    cfg.n_estimators = 100;
    cfg.seed = seed;
    ForestModel f = fit_forest(train, cfg);
    std::size_t forest_ok = 0, tree_ok = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      auto x = test.x.row(i);
      forest_ok += f.predict(x) == test.y.labels[i];
      tree_ok += (f.trees[0].predict_value(x) >= 0.5 ? 1 : 0) == test.y.labels[i];
    }
    if (forest_ok >= tree_ok) ++wins;
  }
  CHECK(wins >= 9);
}

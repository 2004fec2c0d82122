#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "xmlkit/pipeline.hpp"
#include "xmlkit/presets.hpp"

using namespace xmlkit;
using nlohmann::json;

namespace {

Dataset wdbc() { return load_wdbc_csv(WDBC_CSV_PATH); }

ModelSpec cheap_tree_spec() {
  ModelSpec s;
  s.family = ModelFamily::tree;
  s.tree = {Criterion::gini, 4, 5};
  return s;
}

}  // namespace

TEST_CASE("family names round trip with aliases") {
  for (auto f : {ModelFamily::logistic, ModelFamily::sgd_logistic, ModelFamily::tree,
                 ModelFamily::forest, ModelFamily::gbt, ModelFamily::knn, ModelFamily::mlp})
    CHECK(family_from_string(to_string(f)) == f);
  CHECK(family_from_string("sgd") == ModelFamily::sgd_logistic);
  CHECK(family_from_string("xgboost") == ModelFamily::gbt);
  CHECK_THROWS_AS(family_from_string("svm"), DataError);
}

TEST_CASE("train_model produces serializable params per family") {
  Dataset d = wdbc();
  d.x = apply_minmax(fit_minmax(d.x), d.x);

  ModelSpec spec = cheap_tree_spec();
  TrainedModel tm = train_model(d, spec);
  CHECK(tm.params.contains("tree"));
  CHECK(tm.params["importance"].size() == 30);

  spec.family = ModelFamily::logistic;
  spec.linear = {0.5, 50, 0, 0.0, 0};
  tm = train_model(d, spec);
  CHECK(tm.params["weights"].size() == 30);
  CHECK(tm.params.contains("bias"));

  spec.family = ModelFamily::knn;
  spec.knn_k = 4;
  tm = train_model(d, spec);
  CHECK(tm.params["k"] == 4);
  CHECK(tm.params["n_train"] == 569);
}

TEST_CASE("cross_validate mean and std match fold scores") {
  Dataset d = wdbc();
  CvResult r = cross_validate(d, cheap_tree_spec(), 5, 3);
  REQUIRE(r.fold_scores.size() == 5);
  double mean = std::accumulate(r.fold_scores.begin(), r.fold_scores.end(), 0.0) / 5.0;
  CHECK(r.mean == doctest::Approx(mean).epsilon(1e-15));
  double ss = 0.0;
  for (double s : r.fold_scores) ss += (s - mean) * (s - mean);
  CHECK(r.stddev == doctest::Approx(std::sqrt(ss / 5.0)).epsilon(1e-12));
  for (double s : r.fold_scores) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("cross_validate deterministic per seed") {
  Dataset d = wdbc();
  CvResult a = cross_validate(d, cheap_tree_spec(), 5, 11);
  CvResult b = cross_validate(d, cheap_tree_spec(), 5, 11);
  CHECK(a.fold_scores == b.fold_scores);
}

TEST_CASE("cross_validate scores a separable problem perfectly") {
  Dataset d;
  d.x = {40, 1, {}, {}};
  for (int i = 0; i < 40; ++i) {
    d.x.values.push_back(i < 20 ? i * 0.01 : 5.0 + i * 0.01);
    d.y.labels.push_back(i < 20 ? 0 : 1);
  }
  ModelSpec spec;
  spec.family = ModelFamily::tree;
  spec.tree = {Criterion::gini, 0, 1};
  CvResult r = cross_validate(d, spec, 4, 0);
  CHECK(r.mean == 1.0);
  CHECK(r.stddev == 0.0);
}

TEST_CASE("grid_search enumerates the full product and picks the max") {
  Dataset d = wdbc();
  ModelSpec base = cheap_tree_spec();
  GridSpec grid;
  grid.params = {{"criterion", {json("gini"), json("entropy")}},
                 {"min_samples_leaf", {json(5), json(20), json(50)}}};
  GridResult r = grid_search(d, base, grid, 3, 7);
  REQUIRE(r.table.size() == 6);
  double best = -1.0;
  for (const auto& cell : r.table) best = std::max(best, cell["score"].get<double>());
  CHECK(r.best_score == best);
  CHECK(r.best_params.contains("criterion"));
  CHECK(r.best_params.contains("min_samples_leaf"));
}

TEST_CASE("grid_search ties keep the earlier cell") {
  Dataset d;
  d.x = {40, 1, {}, {}};
  for (int i = 0; i < 40; ++i) {
    d.x.values.push_back(i < 20 ? i * 0.01 : 5.0 + i * 0.01);
    d.y.labels.push_back(i < 20 ? 0 : 1);
  }
  ModelSpec base;
  base.family = ModelFamily::tree;
  GridSpec grid;
  grid.params = {{"max_depth", {json(2), json(4)}}};  // both score 1.0
  GridResult r = grid_search(d, base, grid, 4, 0);
  CHECK(r.best_score == 1.0);
  CHECK(r.best_params["max_depth"] == 2);
}

TEST_CASE("grid_search rejects empty and unknown parameters") {
  Dataset d = wdbc();
  CHECK_THROWS_AS(grid_search(d, cheap_tree_spec(), GridSpec{}, 3, 0), DataError);
  GridSpec bad;
  bad.params = {{"kernel", {json("rbf")}}};
  CHECK_THROWS_AS(grid_search(d, cheap_tree_spec(), bad, 3, 0), DataError);
}

TEST_CASE("max_depth null means unlimited") {
  Dataset d = wdbc();
  ModelSpec base = cheap_tree_spec();
  GridSpec grid;
  grid.params = {{"max_depth", {json(nullptr)}}};
  GridResult r = grid_search(d, base, grid, 3, 1);
  CHECK(r.best_params["max_depth"].is_null());
  CHECK(r.best_score > 0.85);
}

TEST_CASE("dataset fingerprint is content-sensitive") {
  Dataset d = wdbc();
  std::uint64_t h = dataset_fingerprint(d);
  CHECK(h == dataset_fingerprint(d));
  Dataset tweaked = d;
  tweaked.x.values[0] += 1e-9;
  CHECK(dataset_fingerprint(tweaked) != h);
  Dataset flipped = d;
  flipped.y.labels[0] ^= 1;
  CHECK(dataset_fingerprint(flipped) != h);
}

TEST_CASE("run_experiment report structure and provenance") {
  Dataset d = wdbc();
  ExperimentConfig cfg;
  cfg.spec = cheap_tree_spec();
  cfg.seed = 42;
  json r = run_experiment(d, cfg);

  CHECK(r["toolkit_version"] == kVersion);
  CHECK(r["rng_algorithm"] == kRngAlgorithm);
  CHECK(r["seed"] == 42);
  CHECK(r["dataset"]["rows"] == 569);
  CHECK(r["dataset"]["cols"] == 30);
  CHECK(r["feature_names"].size() == 30);
  CHECK(r["split"]["stratified"] == true);
  CHECK(r["model"]["family"] == "tree");
  for (const char* split : {"train", "test"})
    for (const char* m : {"accuracy", "precision", "recall", "f1", "roc_auc"}) {
      double v = r["metrics"][split][m].get<double>();
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  std::size_t total = r["confusion"]["tp"].get<std::size_t>() +
                      r["confusion"]["tn"].get<std::size_t>() +
                      r["confusion"]["fp"].get<std::size_t>() +
                      r["confusion"]["fn"].get<std::size_t>();
  CHECK(total == 170);  // per-class floors of the 0.3 share; remainders go to train
  CHECK(!r.contains("history"));
  CHECK(!r.contains("cv"));
}

TEST_CASE("run_experiment is byte-identical per seed") {
  Dataset d = wdbc();
  ExperimentConfig cfg;
  cfg.spec = cheap_tree_spec();
  cfg.seed = 9;
  cfg.cv_k = 3;
  cfg.explain = ExplainMode::shap_mc;
  cfg.explain_instances = 2;
  cfg.shap_permutations = 10;
  cfg.background_size = 15;
  CHECK(run_experiment(d, cfg).dump() == run_experiment(d, cfg).dump());
}

TEST_CASE("three-way split adds validation metrics; mlp adds history") {
  Dataset d = wdbc();
  ExperimentConfig cfg;
  cfg.spec.family = ModelFamily::mlp;
  cfg.spec.mlp.epochs = 5;
  cfg.spec.mlp_hidden = {8};
  cfg.split_ratios = {0.7, 0.2, 0.1};
  cfg.seed = 3;
  json r = run_experiment(d, cfg);
  CHECK(r["metrics"].contains("val"));
  CHECK(r["history"]["train_loss"].size() == 5);
  CHECK(r["history"]["val_loss"].size() == 5);
}

TEST_CASE("cv, knn sweep, and shap blocks appear on request") {
  Dataset d = wdbc();
  ExperimentConfig cfg;
  cfg.spec = cheap_tree_spec();
  cfg.seed = 5;
  cfg.cv_k = 3;
  cfg.knn_sweep_kmax = 4;
  cfg.explain = ExplainMode::shap_mc;
  cfg.explain_instances = 3;
  cfg.shap_permutations = 8;
  cfg.background_size = 10;
  json r = run_experiment(d, cfg);

  CHECK(r["cv"]["k"] == 3);
  CHECK(r["cv"]["fold_scores"].size() == 3);
  CHECK(r["knn_sweep"]["accuracy_per_k"].size() == 4);
  std::size_t best_k = r["knn_sweep"]["best_k"].get<std::size_t>();
  CHECK(best_k >= 1);
  CHECK(best_k <= 4);

  REQUIRE(r["explanations"].size() == 3);
  CHECK(r["explain_config"]["mode"] == "shap-mc");
  CHECK(r["explain_config"]["output_space"] == "probability");
  for (const auto& e : r["explanations"]) {
    REQUIRE(e["shap"]["phi"].size() == 30);
    // permutation mode: additivity holds by telescoping
    double sum = e["shap"]["base_value"].get<double>();
    for (const auto& p : e["shap"]["phi"]) sum += p.get<double>();
    CHECK(sum == doctest::Approx(e["shap"]["fx"].get<double>()).epsilon(1e-9));
  }
}

TEST_CASE("lime explanations carry surrogate output") {
  Dataset d = wdbc();
  ExperimentConfig cfg;
  cfg.spec = cheap_tree_spec();
  cfg.seed = 8;
  cfg.explain = ExplainMode::lime;
  cfg.explain_instances = 2;
  json r = run_experiment(d, cfg);
  REQUIRE(r["explanations"].size() == 2);
  for (const auto& e : r["explanations"]) {
    CHECK(e["lime"]["weights"].size() == 30);
    CHECK(e["lime"]["top_k"].size() == 10);
    double pb = e["lime"]["p_benign"].get<double>();
    double pm = e["lime"]["p_malignant"].get<double>();
    CHECK(pb + pm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gbt reports its stand-in note") {
  Dataset d = wdbc();
  ExperimentConfig cfg;
  cfg.spec.family = ModelFamily::gbt;
  cfg.spec.gbt = {10, 0.1, {Criterion::variance, 3, 1}};
  cfg.seed = 2;
  json r = run_experiment(d, cfg);
  CHECK(r["model"]["note"] == "plain gradient boosting (XGBoost stand-in)");
}

TEST_CASE("preset specs load") {
  ModelSpec s = default_model_spec(ModelFamily::knn);
  CHECK(s.knn_k == 4);
  s = default_model_spec(ModelFamily::tree);
  CHECK(s.tree.criterion == Criterion::entropy);
  CHECK(s.tree.max_depth == 10);
  CHECK(s.tree.min_samples_leaf == 10);

  GridSpec dt = paper_dt_grid();
  CHECK(dt.scoring == Scoring::roc_auc);
  std::size_t cells = 1;
  for (const auto& [name, values] : dt.params) cells *= values.size();
  CHECK(cells == 2 * 5 * 5);

  GridSpec rf = paper_rf_grid();
  CHECK(rf.scoring == Scoring::accuracy);
  cells = 1;
  for (const auto& [name, values] : rf.params) cells *= values.size();
  CHECK(cells == 5 * 5 * 5);
}

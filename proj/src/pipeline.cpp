#include "xmlkit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xmlkit/lime.hpp"
#include "xmlkit/shap.hpp"

namespace xmlkit {

using nlohmann::json;

ModelFamily family_from_string(const std::string& s) {
  if (s == "logistic") return ModelFamily::logistic;
  if (s == "sgd" || s == "sgd_logistic") return ModelFamily::sgd_logistic;
  if (s == "tree") return ModelFamily::tree;
  if (s == "forest") return ModelFamily::forest;
  if (s == "gbt" || s == "xgboost") return ModelFamily::gbt;
  if (s == "knn") return ModelFamily::knn;
  if (s == "mlp") return ModelFamily::mlp;
  throw DataError("unknown model family: " + s);
}

std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::logistic: return "logistic";
    case ModelFamily::sgd_logistic: return "sgd_logistic";
    case ModelFamily::tree: return "tree";
    case ModelFamily::forest: return "forest";
    case ModelFamily::gbt: return "gbt";
    case ModelFamily::knn: return "knn";
    default: return "mlp";
  }
}

namespace {

json tree_to_json(const TreeModel& t, int id) {
  const TreeNode& n = t.nodes[static_cast<std::size_t>(id)];
  if (n.feature < 0) return json{{"value", n.value}};
  return json{{"feature", n.feature},
              {"threshold", n.threshold},
              {"left", tree_to_json(t, n.left)},
              {"right", tree_to_json(t, n.right)}};
}

}  // namespace

TrainedModel train_model(const Dataset& train, const ModelSpec& spec,
                         const Dataset* validation) {
  TrainedModel tm;
  switch (spec.family) {
    case ModelFamily::logistic: {
      LinearTrainConfig cfg = spec.linear;
      cfg.batch_size = 0;
      cfg.seed = spec.seed;
      auto m = std::make_unique<LogisticModel>(fit_logistic(train, cfg));
      tm.params = json{{"weights", m->weights}, {"bias", m->bias}};
      tm.model = std::move(m);
      break;
    }
    case ModelFamily::sgd_logistic: {
      LinearTrainConfig cfg = spec.linear;
      if (cfg.batch_size == 0) cfg.batch_size = 32;
      cfg.seed = spec.seed;
      auto m = std::make_unique<LogisticModel>(fit_logistic(train, cfg));
      tm.params = json{{"weights", m->weights}, {"bias", m->bias}};
      tm.model = std::move(m);
      break;
    }
    case ModelFamily::tree: {
      auto m = std::make_unique<TreeModel>(fit_tree(train, spec.tree));
      tm.params = json{{"tree", tree_to_json(*m, 0)}, {"importance", m->importance}};
      tm.model = std::move(m);
      break;
    }
    case ModelFamily::forest: {
      ForestConfig cfg = spec.forest;
      cfg.seed = spec.seed;
      auto m = std::make_unique<ForestModel>(fit_forest(train, cfg));
      json trees = json::array();
      for (const auto& t : m->trees) trees.push_back(tree_to_json(t, 0));
      tm.params = json{{"trees", trees}};
      tm.model = std::move(m);
      break;
    }
    case ModelFamily::gbt: {
      auto m = std::make_unique<GbtModel>(fit_gbt(train, spec.gbt));
      json trees = json::array();
      for (const auto& t : m->trees) trees.push_back(tree_to_json(t, 0));
      tm.params = json{{"initial_logit", m->initial_logit},
                       {"shrinkage", m->shrinkage},
                       {"trees", trees}};
      tm.model = std::move(m);
      break;
    }
    case ModelFamily::knn: {
      auto m = std::make_unique<KnnModel>(train, spec.knn_k);
      tm.params = json{{"k", spec.knn_k}, {"n_train", train.size()}};
      tm.model = std::move(m);
      break;
    }
    case ModelFamily::mlp: {
      TrainConfig cfg = spec.mlp;
      cfg.seed = spec.seed;
      auto [net, hist] = train_mlp(train, cfg, spec.mlp_hidden, spec.mlp_activation,
                                   validation);
      auto m = std::make_unique<Network>(std::move(net));
      tm.params = json{{"sizes", m->sizes},
                       {"activation", to_string(spec.mlp_activation)},
                       {"parameters", m->flatten()}};
      tm.history = std::move(hist);
      tm.model = std::move(m);
      break;
    }
  }
  return tm;
}

namespace {

double score_fold(const Predictor& model, const Dataset& test, Scoring scoring) {
  if (scoring == Scoring::accuracy) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
      correct += model.predict(test.x.row(i)) == test.y.labels[i] ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(test.size());
  }
  std::vector<double> scores(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) scores[i] = model.predict_proba(test.x.row(i));
  return roc_auc(test.y, scores);
}

}  // namespace

CvResult cross_validate(const Dataset& d, const ModelSpec& spec, std::size_t k,
                        std::uint64_t seed, Scoring scoring) {
  FoldAssignment fa = stratified_kfold(d.y, k, seed);
  CvResult r;
  for (std::size_t fold = 0; fold < k; ++fold) {
    Dataset train = d.subset(fa.train_indices(fold));
    Dataset test = d.subset(fa.test_indices(fold));
    Scaler scaler = fit_minmax(train.x);
    train.x = apply_minmax(scaler, train.x);
    test.x = apply_minmax(scaler, test.x);
    ModelSpec fold_spec = spec;
    fold_spec.seed = derive_subseed(seed, 100 + fold);
    TrainedModel tm = train_model(train, fold_spec);
    r.fold_scores.push_back(score_fold(*tm.model, test, scoring));
  }
  r.mean = std::accumulate(r.fold_scores.begin(), r.fold_scores.end(), 0.0) /
           static_cast<double>(k);
  double ss = 0.0;
  for (double s : r.fold_scores) ss += (s - r.mean) * (s - r.mean);
  r.stddev = std::sqrt(ss / static_cast<double>(k));
  return r;
}

namespace {

void apply_param(ModelSpec& spec, const std::string& name, const json& value) {
  auto as_count = [&]() -> std::size_t {
    if (value.is_null()) return 0;  // "None" = unlimited
    return value.get<std::size_t>();
  };
  if (name == "criterion") {
    spec.tree.criterion = criterion_from_string(value.get<std::string>());
    spec.forest.tree.criterion = spec.tree.criterion;
  } else if (name == "max_depth") {
    spec.tree.max_depth = as_count();
    spec.forest.tree.max_depth = spec.tree.max_depth;
  } else if (name == "min_samples_leaf") {
    spec.tree.min_samples_leaf = as_count();
    spec.forest.tree.min_samples_leaf = spec.tree.min_samples_leaf;
  } else if (name == "n_estimators") {
    spec.forest.n_estimators = as_count();
  } else if (name == "k") {
    spec.knn_k = as_count();
  } else if (name == "learning_rate") {
    spec.linear.learning_rate = value.get<double>();
    spec.gbt.learning_rate = value.get<double>();
  } else if (name == "n_rounds") {
    spec.gbt.n_rounds = as_count();
  } else {
    throw DataError("unknown grid parameter: " + name);
  }
}

}  // namespace

GridResult grid_search(const Dataset& d, const ModelSpec& base, const GridSpec& grid,
                       std::size_t k, std::uint64_t seed) {
  if (grid.params.empty()) throw DataError("empty grid");
  GridResult result;
  result.table = json::array();
  result.best_score = -std::numeric_limits<double>::infinity();

  std::vector<std::size_t> idx(grid.params.size(), 0);
  bool done = false;
  while (!done) {
    ModelSpec spec = base;
    json cell_params = json::object();
    for (std::size_t p = 0; p < grid.params.size(); ++p) {
      const auto& [name, values] = grid.params[p];
      apply_param(spec, name, values[idx[p]]);
      cell_params[name] = values[idx[p]];
    }
    CvResult cv = cross_validate(d, spec, k, seed, grid.scoring);
    result.table.push_back(json{{"params", cell_params}, {"score", cv.mean}});
    if (cv.mean > result.best_score) {  // ties keep the earlier (declaration-order) cell
      result.best_score = cv.mean;
      result.best_params = cell_params;
    }
    // odometer increment
    for (std::size_t p = grid.params.size(); p-- > 0;) {
      if (++idx[p] < grid.params[p].second.size()) break;
      idx[p] = 0;
      if (p == 0) done = true;
    }
  }
  return result;
}

json metrics_to_json(const MetricsReport& m) {
  return json{{"accuracy", m.accuracy},
              {"precision", m.precision},
              {"recall", m.recall},
              {"f1", m.f1},
              {"roc_auc", m.roc_auc}};
}

std::uint64_t dataset_fingerprint(const Dataset& d) {
  // FNV-1a over the raw value bytes and labels.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* p, std::size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(d.x.values.data(), d.x.values.size() * sizeof(double));
  mix(d.y.labels.data(), d.y.labels.size() * sizeof(int));
  return h;
}

namespace {

MetricsReport evaluate(const Predictor& model, const Dataset& d, ConfusionMatrix* cm_out) {
  LabelVector pred;
  std::vector<double> scores(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    scores[i] = model.predict_proba(d.x.row(i));
    pred.labels.push_back(scores[i] >= 0.5 ? 1 : 0);
  }
  ConfusionMatrix cm = confusion(d.y, pred);
  MetricsReport m = classification_report(cm);
  bool both = cm.tp + cm.fn > 0 && cm.tn + cm.fp > 0;
  m.roc_auc = both ? roc_auc(d.y, scores) : 0.0;
  if (cm_out) *cm_out = cm;
  return m;
}

// Pick explanation instances: alternate predicted-malignant and
// predicted-benign test rows so both classes appear.
std::vector<std::size_t> pick_instances(const Predictor& model, const Dataset& test,
                                        std::size_t n) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < test.size(); ++i)
    (model.predict(test.x.row(i)) == 1 ? pos : neg).push_back(i);
  std::vector<std::size_t> out;
  std::size_t pi = 0, ni = 0;
  while (out.size() < n && (pi < pos.size() || ni < neg.size())) {
    if (pi < pos.size()) out.push_back(pos[pi++]);
    if (out.size() < n && ni < neg.size()) out.push_back(neg[ni++]);
  }
  return out;
}

}  // namespace

json run_experiment(const Dataset& raw, const ExperimentConfig& cfg) {
  SplitSpec split;
  split.ratios = cfg.split_ratios;
  split.seed = derive_subseed(cfg.seed, 1);
  std::vector<Dataset> parts = stratified_split(raw, split);
  Dataset train = parts.front();
  Dataset test = parts.back();
  const Dataset* val = parts.size() == 3 ? &parts[1] : nullptr;

  Scaler scaler = fit_minmax(train.x);
  train.x = apply_minmax(scaler, train.x);
  test.x = apply_minmax(scaler, test.x);
  Dataset val_scaled;
  if (val) {
    val_scaled = parts[1];
    val_scaled.x = apply_minmax(scaler, val_scaled.x);
  }

  ModelSpec spec = cfg.spec;
  spec.seed = derive_subseed(cfg.seed, 2);
  TrainedModel tm = train_model(train, spec, val ? &val_scaled : nullptr);

  ConfusionMatrix cm;
  MetricsReport test_metrics = evaluate(*tm.model, test, &cm);
  MetricsReport train_metrics = evaluate(*tm.model, train, nullptr);

  json report{
      {"toolkit_version", kVersion},
      {"rng_algorithm", kRngAlgorithm},
      {"seed", cfg.seed},
      {"dataset",
       {{"rows", raw.size()}, {"cols", raw.x.cols}, {"content_hash", dataset_fingerprint(raw)}}},
      {"feature_names", raw.x.feature_names},
      {"split", {{"ratios", cfg.split_ratios}, {"seed", split.seed}, {"stratified", true}}},
      {"model",
       {{"family", to_string(spec.family)}, {"seed", spec.seed}, {"params", tm.params}}},
      {"metrics", {{"train", metrics_to_json(train_metrics)}, {"test", metrics_to_json(test_metrics)}}},
      {"confusion", {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}}},
  };
  if (spec.family == ModelFamily::gbt) report["model"]["note"] = "plain gradient boosting (XGBoost stand-in)";
  if (val) {
    MetricsReport vm = evaluate(*tm.model, val_scaled, nullptr);
    report["metrics"]["val"] = metrics_to_json(vm);
  }
  if (spec.family == ModelFamily::mlp) {
    report["history"] = {{"train_loss", tm.history.train_loss},
                         {"train_accuracy", tm.history.train_accuracy},
                         {"val_loss", tm.history.val_loss},
                         {"val_accuracy", tm.history.val_accuracy}};
  }

  if (cfg.cv_k > 0) {
    CvResult cv = cross_validate(raw, cfg.spec, cfg.cv_k, derive_subseed(cfg.seed, 3));
    report["cv"] = {{"k", cfg.cv_k},
                    {"fold_scores", cv.fold_scores},
                    {"mean", cv.mean},
                    {"std", cv.stddev}};
  }

  if (cfg.knn_sweep_kmax > 0) {
    KSweepResult sweep = sweep_k(raw, cfg.knn_sweep_kmax, 5, derive_subseed(cfg.seed, 4));
    report["knn_sweep"] = {{"accuracy_per_k", sweep.accuracy_per_k}, {"best_k", sweep.best_k}};
  }

  if (cfg.explain != ExplainMode::none) {
    // Background: training rows sampled with a recorded sub-seed.
    std::uint64_t bg_seed = derive_subseed(cfg.seed, 5);
    Rng rng(bg_seed);
    std::size_t bg_n = std::min(cfg.background_size, train.size());
    std::vector<std::size_t> bg_idx(train.size());
    std::iota(bg_idx.begin(), bg_idx.end(), 0);
    rng.shuffle(bg_idx);
    bg_idx.resize(bg_n);
    BackgroundSet bg{train.subset(bg_idx).x};

    auto instances = pick_instances(*tm.model, test, cfg.explain_instances);
    json expl = json::array();
    TrainStats stats = compute_train_stats(train.x);
    for (std::size_t j = 0; j < instances.size(); ++j) {
      std::size_t i = instances[j];
      std::vector<double> x = test.x.row(i);
      json e{{"instance_index", i},
             {"true_label", test.y.labels[i]},
             {"predicted", tm.model->predict(x)}};
      if (cfg.explain == ExplainMode::lime) {
        LimeConfig lc;
        lc.seed = derive_subseed(cfg.seed, 1000 + j);
        LimeExplanation le = fit_surrogate(*tm.model, x, stats, lc);
        e["lime"] = {{"intercept", le.intercept}, {"weights", le.weights},
                     {"top_k", le.top_k},         {"fidelity", le.local_fidelity},
                     {"p_benign", le.p_benign},   {"p_malignant", le.p_malignant}};
      } else {
        Attribution a = cfg.explain == ExplainMode::shap_exact
                            ? shapley_exact(*tm.model, bg, x)
                            : shapley_permutation(*tm.model, bg, x, cfg.shap_permutations,
                                                  derive_subseed(cfg.seed, 2000 + j));
        e["shap"] = {{"phi", a.phi},
                     {"base_value", a.base_value},
                     {"fx", a.fx},
                     {"mode", a.mode},
                     {"n_permutations", a.n_permutations},
                     {"stderr", a.stderr_phi}};
      }
      expl.push_back(e);
    }
    report["explanations"] = expl;
    report["explain_config"] = {{"mode", cfg.explain == ExplainMode::lime
                                             ? "lime"
                                             : (cfg.explain == ExplainMode::shap_exact
                                                    ? "shap-exact"
                                                    : "shap-mc")},
                                {"background_size", bg_n},
                                {"background_seed", bg_seed},
                                {"output_space", "probability"},
                                {"n_permutations", cfg.shap_permutations}};
  }
  return report;
}

json run_experiment(const ExperimentConfig& cfg) {
  Dataset raw = load_wdbc_csv(cfg.data_path);
  return run_experiment(raw, cfg);
}

}  // namespace xmlkit

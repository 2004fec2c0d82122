#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "xmlkit/pipeline.hpp"
#include "xmlkit/presets.hpp"
#include "xmlkit/svg.hpp"

namespace {

using nlohmann::json;
using namespace xmlkit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct CommonOpts {
  std::string data_path;
  std::string config_path;
  std::string out_path;
  std::string split = "7:3";
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool quiet = false;
};

std::vector<double> parse_split(const std::string& s) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
  double sum = 0.0;
  for (double p : parts) sum += p;
  if (sum <= 0.0) throw DataError("invalid split: " + s);
  for (double& p : parts) p /= sum;
  return parts;
}

std::uint64_t resolve_seed(const CommonOpts& o) {
  if (o.seed_given) return o.seed;
  if (const char* env = std::getenv("XMLKIT_SEED")) return std::stoull(env);
  return 0;
}

// Config file: flat JSON object whose keys mirror the CLI flags.
void merge_config_file(const std::string& path, CommonOpts& o, std::string& model,
                       std::string& preset) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  json cfg = json::parse(in, nullptr, true, true);
  if (cfg.contains("data")) o.data_path = cfg["data"].get<std::string>();
  if (cfg.contains("split")) o.split = cfg["split"].get<std::string>();
  if (cfg.contains("seed") && !o.seed_given) {
    o.seed = cfg["seed"].get<std::uint64_t>();
    o.seed_given = true;
  }
  if (cfg.contains("model") && model.empty()) model = cfg["model"].get<std::string>();
  if (cfg.contains("preset") && preset.empty()) preset = cfg["preset"].get<std::string>();
  if (cfg.contains("out") && o.out_path.empty()) o.out_path = cfg["out"].get<std::string>();
}

void emit(const json& doc, const CommonOpts& o) {
  if (!o.out_path.empty()) {
    std::ofstream out(o.out_path);
    if (!out) throw DataError("cannot write: " + o.out_path);
    out << doc.dump(2) << "\n";
    if (!o.quiet) std::cerr << "wrote " << o.out_path << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--data", o.data_path, "WDBC CSV path");
  cmd->add_option("--config", o.config_path, "flat JSON config file mirroring flags");
  cmd->add_option("--out", o.out_path, "output file (default: stdout)");
  cmd->add_option("--split", o.split, "split ratios, e.g. 7:3 or 7:2:1");
  cmd->add_option("--seed", o.seed, "master seed (env XMLKIT_SEED as fallback)")
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_flag("--quiet", o.quiet, "machine-readable stdout only");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabular breast-cancer classification and explainability toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string model_name, preset, explain_mode, plot_kind;
  std::size_t cv_k = 5, instances = 5, knn_k = 4;
  std::vector<std::string> report_inputs;

  auto* inspect = app.add_subcommand("inspect", "dataset summary");
  add_common(inspect, o);

  auto* train = app.add_subcommand("train", "train one model and write a report");
  add_common(train, o);
  train->add_option("--model", model_name, "logistic|sgd|tree|forest|gbt|knn|mlp");
  train->add_option("--preset", preset, "paper-ann|paper-knn-sweep");
  train->add_option("--explain", explain_mode, "shap-exact|shap-mc|lime");
  train->add_option("--instances", instances, "test instances to explain");
  train->add_option("--k", knn_k, "neighbors for knn");

  auto* cv = app.add_subcommand("cv", "stratified cross-validation");
  add_common(cv, o);
  cv->add_option("--model", model_name)->required();
  cv->add_option("--k", cv_k, "number of folds");

  auto* grid = app.add_subcommand("grid", "grid search");
  add_common(grid, o);
  grid->add_option("--preset", preset, "paper-dt-grid|paper-rf-grid")->required();
  grid->add_option("--k", cv_k, "number of folds");

  auto* explain = app.add_subcommand("explain", "train then explain test instances");
  add_common(explain, o);
  explain->add_option("--model", model_name)->required();
  explain->add_option("--explain", explain_mode, "shap-exact|shap-mc|lime")->required();
  explain->add_option("--instances", instances);

  auto* report = app.add_subcommand("report", "render plot data from report files");
  add_common(report, o);
  report->add_option("--in", report_inputs, "report JSON file(s)")->required();
  report->add_option("--plot", plot_kind,
                     "force|waterfall|summary|importance|bar-compare|knn-curve")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!o.config_path.empty()) merge_config_file(o.config_path, o, model_name, preset);

    if (inspect->parsed()) {
      Dataset d = load_wdbc_csv(o.data_path);
      std::size_t pos = 0;
      for (int y : d.y.labels) pos += static_cast<std::size_t>(y);
      emit(json{{"rows", d.size()},
                {"features", d.x.cols},
                {"benign", d.size() - pos},
                {"malignant", pos},
                {"content_hash", dataset_fingerprint(d)},
                {"feature_names", d.x.feature_names}},
           o);
      return kExitOk;
    }

    if (train->parsed() || explain->parsed()) {
      ExperimentConfig cfg;
      cfg.data_path = o.data_path;
      cfg.seed = resolve_seed(o);
      if (!preset.empty()) {
        apply_preset(preset, cfg);
      } else {
        if (model_name.empty()) throw DataError("need --model or --preset");
        cfg.spec = default_model_spec(family_from_string(model_name));
        cfg.split_ratios = parse_split(o.split);
      }
      if (train->count("--split") || explain->count("--split"))
        cfg.split_ratios = parse_split(o.split);
      if (cfg.spec.family == ModelFamily::knn && (train->count("--k") != 0))
        cfg.spec.knn_k = knn_k;
      if (!explain_mode.empty()) {
        if (explain_mode == "shap-exact") cfg.explain = ExplainMode::shap_exact;
        else if (explain_mode == "shap-mc") cfg.explain = ExplainMode::shap_mc;
        else if (explain_mode == "lime") cfg.explain = ExplainMode::lime;
        else throw DataError("unknown explain mode: " + explain_mode);
        cfg.explain_instances = instances;
      }
      emit(run_experiment(cfg), o);
      return kExitOk;
    }

    if (cv->parsed()) {
      Dataset d = load_wdbc_csv(o.data_path);
      ModelSpec spec = default_model_spec(family_from_string(model_name));
      CvResult r = cross_validate(d, spec, cv_k, resolve_seed(o));
      emit(json{{"model", model_name},
                {"k", cv_k},
                {"fold_scores", r.fold_scores},
                {"mean", r.mean},
                {"std", r.stddev},
                {"rng_algorithm", kRngAlgorithm}},
           o);
      return kExitOk;
    }

    if (grid->parsed()) {
      Dataset d = load_wdbc_csv(o.data_path);
      bool is_dt = preset == "paper-dt-grid";
      if (!is_dt && preset != "paper-rf-grid") throw DataError("unknown grid preset: " + preset);
      ModelSpec base = default_model_spec(is_dt ? ModelFamily::tree : ModelFamily::forest);
      GridSpec g = is_dt ? paper_dt_grid() : paper_rf_grid();
      GridResult r = grid_search(d, base, g, cv_k, resolve_seed(o));
      emit(json{{"preset", preset},
                {"scoring", g.scoring == Scoring::roc_auc ? "roc_auc" : "accuracy"},
                {"best_params", r.best_params},
                {"best_score", r.best_score},
                {"table", r.table}},
           o);
      return kExitOk;
    }

    if (report->parsed()) {
      json doc;
      if (report_inputs.size() == 1) {
        std::ifstream in(report_inputs[0]);
        if (!in) throw DataError("cannot open report: " + report_inputs[0]);
        doc = json::parse(in);
      } else {
        // merge several reports into a comparison table
        json rows = json::array();
        for (const auto& path : report_inputs) {
          std::ifstream in(path);
          if (!in) throw DataError("cannot open report: " + path);
          json r = json::parse(in);
          rows.push_back(json{{"name", r["model"]["family"]},
                              {"accuracy", r["metrics"]["test"]["accuracy"]},
                              {"recall", r["metrics"]["test"]["recall"]}});
        }
        doc["comparison"] = rows;
      }
      PlotOutput out = render_plot_data(doc, plot_kind_from_string(plot_kind));
      std::string svg_path = o.out_path.empty() ? "plot.svg" : o.out_path;
      std::ofstream svg(svg_path);
      if (!svg) throw DataError("cannot write: " + svg_path);
      svg << out.svg;
      std::ofstream companion(svg_path + ".json");
      companion << out.data.dump(2) << "\n";
      if (!o.quiet) std::cerr << "wrote " << svg_path << " and " << svg_path << ".json\n";
      return kExitOk;
    }
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

#pragma once

#include <json.hpp>
#include <string>

namespace xmlkit {

enum class PlotKind { force, waterfall, summary, importance, bar_compare, knn_curve };

PlotKind plot_kind_from_string(const std::string& s);

struct PlotOutput {
  std::string svg;       // well-formed standalone SVG document
  nlohmann::json data;   // the exact numbers behind the drawing
};

// Render plot data from an experiment report. The explanation kinds
// (force, waterfall, summary, importance) need report["explanations"] with
// SHAP attributions; knn-curve needs report["knn_sweep"]; bar-compare needs
// report["comparison"] (built by the CLI `report` subcommand).
PlotOutput render_plot_data(const nlohmann::json& report, PlotKind kind);

}  // namespace xmlkit

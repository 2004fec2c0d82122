#include "xmlkit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

using nlohmann::json;

PlotKind plot_kind_from_string(const std::string& s) {
  if (s == "force") return PlotKind::force;
  if (s == "waterfall") return PlotKind::waterfall;
  if (s == "summary") return PlotKind::summary;
  if (s == "importance") return PlotKind::importance;
  if (s == "bar-compare") return PlotKind::bar_compare;
  if (s == "knn-curve") return PlotKind::knn_curve;
  throw DataError("unknown plot kind: " + s);
}

namespace {

constexpr const char* kRed = "#d62728";
constexpr const char* kBlue = "#1f77b4";

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

class SvgWriter {
 public:
  SvgWriter(double w, double h) : w_(w), h_(h) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h)
          << "\">\n";
    body_ << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
          << "\" fill=\"white\"/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0) {
    body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
          << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << fmt(width) << "\"/>\n";
  }
  void circle(double cx, double cy, double r, const std::string& fill) {
    body_ << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r)
          << "\" fill=\"" << fill << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, double size = 11.0,
            const std::string& anchor = "start") {
    body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << fmt(size)
          << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">"
          << xml_escape(s) << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (auto& [x, y] : pts) body_ << fmt(x) << "," << fmt(y) << " ";
    body_ << "\"/>\n";
  }
  std::string finish() {
    body_ << "</svg>\n";
    return body_.str();
  }

 private:
  double w_, h_;
  std::ostringstream body_;
};

struct ShapData {
  std::vector<std::string> names;
  std::vector<double> phi;
  double base = 0.0, fx = 0.0;
};

ShapData first_attribution(const json& report) {
  if (!report.contains("explanations") || report["explanations"].empty() ||
      !report["explanations"][0].contains("shap"))
    throw DataError("report carries no SHAP attributions for this plot kind");
  const json& a = report["explanations"][0]["shap"];
  ShapData d;
  d.phi = a["phi"].get<std::vector<double>>();
  d.base = a["base_value"].get<double>();
  d.fx = a["fx"].get<double>();
  d.names = report["feature_names"].get<std::vector<std::string>>();
  return d;
}

std::vector<std::size_t> order_by_abs(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(v[a]) > std::abs(v[b]); });
  return idx;
}

PlotOutput render_force(const json& report) {
  ShapData d = first_attribution(report);
  auto order = order_by_abs(d.phi);

  const double W = 720, H = 160, x0 = 60, x1 = W - 60, ymid = 80;
  // Map model-output range to the horizontal axis.
  double lo = std::min(d.base, d.fx), hi = std::max(d.base, d.fx);
  double walk = d.base;
  for (std::size_t i : order) {
    walk += d.phi[i];
    lo = std::min(lo, walk);
    hi = std::max(hi, walk);
  }
  double span = std::max(hi - lo, 1e-9);
  lo -= 0.25 * span;
  hi += 0.25 * span;
  auto sx = [&](double v) { return x0 + (v - lo) / (hi - lo) * (x1 - x0); };

  SvgWriter svg(W, H);
  svg.line(x0, ymid, x1, ymid, "#999");
  // Signed segments laid end to end from the base value up to fx.
  double cursor = d.base;
  json segments = json::array();
  for (std::size_t i : order) {
    double next = cursor + d.phi[i];
    svg.rect(std::min(sx(cursor), sx(next)), ymid - 10, std::abs(sx(next) - sx(cursor)), 20,
             d.phi[i] >= 0 ? kRed : kBlue);
    segments.push_back(json{{"feature", d.names[i]}, {"phi", d.phi[i]},
                            {"from", cursor}, {"to", next}});
    cursor = next;
  }
  svg.line(sx(d.base), ymid - 22, sx(d.base), ymid + 22, "#333");
  svg.text(sx(d.base), ymid - 28, "base " + fmt(d.base), 10, "middle");
  svg.line(sx(d.fx), ymid - 22, sx(d.fx), ymid + 22, "#333");
  svg.text(sx(d.fx), ymid + 38, "f(x) " + fmt(d.fx), 10, "middle");

  return {svg.finish(),
          json{{"kind", "force"}, {"base_value", d.base}, {"fx", d.fx}, {"segments", segments}}};
}

PlotOutput render_waterfall(const json& report) {
  ShapData d = first_attribution(report);
  auto order = order_by_abs(d.phi);
  const std::size_t top = std::min<std::size_t>(10, order.size());

  const double W = 720, rowh = 24, H = 80 + rowh * static_cast<double>(top + 1);
  const double x0 = 220, x1 = W - 40;
  double lo = d.base, hi = d.base, cursor = d.base;
  for (std::size_t j = 0; j < top; ++j) {
    cursor += d.phi[order[j]];
    lo = std::min(lo, cursor);
    hi = std::max(hi, cursor);
  }
  lo = std::min(lo, d.fx);
  hi = std::max(hi, d.fx);
  double span = std::max(hi - lo, 1e-9);
  lo -= 0.1 * span;
  hi += 0.1 * span;
  auto sx = [&](double v) { return x0 + (v - lo) / (hi - lo) * (x1 - x0); };

  SvgWriter svg(W, H);
  svg.line(sx(d.base), 30, sx(d.base), H - 20, "#bbb");
  svg.text(sx(d.base), 20, "base " + fmt(d.base), 10, "middle");
  cursor = d.base;
  json bars = json::array();
  for (std::size_t j = 0; j < top; ++j) {
    std::size_t i = order[j];
    double next = cursor + d.phi[i];
    double y = 40 + rowh * static_cast<double>(j);
    svg.rect(std::min(sx(cursor), sx(next)), y, std::abs(sx(next) - sx(cursor)), rowh - 6,
             d.phi[i] >= 0 ? kRed : kBlue);
    svg.text(8, y + rowh - 11, d.names[i], 10);
    bars.push_back(json{{"feature", d.names[i]}, {"phi", d.phi[i]},
                        {"from", cursor}, {"to", next}});
    cursor = next;
  }
  svg.text(sx(d.fx), H - 6, "f(x) " + fmt(d.fx), 10, "middle");
  return {svg.finish(),
          json{{"kind", "waterfall"}, {"base_value", d.base}, {"fx", d.fx}, {"bars", bars}}};
}

PlotOutput render_summary(const json& report) {
  if (!report.contains("explanations") || report["explanations"].empty() ||
      !report["explanations"][0].contains("shap"))
    throw DataError("report carries no SHAP attributions for this plot kind");
  auto names = report["feature_names"].get<std::vector<std::string>>();
  const std::size_t d = names.size();

  // mean |phi| ranking across all explained instances
  std::vector<double> mean_abs(d, 0.0);
  std::size_t count = 0;
  for (const auto& e : report["explanations"]) {
    if (!e.contains("shap")) continue;
    auto phi = e["shap"]["phi"].get<std::vector<double>>();
    for (std::size_t i = 0; i < d; ++i) mean_abs[i] += std::abs(phi[i]);
    ++count;
  }
  for (double& v : mean_abs) v /= static_cast<double>(count);
  auto order = order_by_abs(mean_abs);
  const std::size_t top = std::min<std::size_t>(10, d);

  double maxabs = 1e-9;
  for (const auto& e : report["explanations"])
    for (double p : e["shap"]["phi"].get<std::vector<double>>())
      maxabs = std::max(maxabs, std::abs(p));

  const double W = 720, rowh = 26, H = 50 + rowh * static_cast<double>(top);
  const double x0 = 220, x1 = W - 40, xmid = 0.5 * (x0 + x1);
  auto sx = [&](double v) { return xmid + v / maxabs * 0.5 * (x1 - x0); };

  // Jitter derived from the report seed so renders are reproducible.
  std::uint64_t seed = report.contains("seed") ? report["seed"].get<std::uint64_t>() : 0;
  Rng jitter(derive_subseed(seed, 9001));

  SvgWriter svg(W, H);
  svg.line(xmid, 20, xmid, H - 20, "#bbb");
  json points = json::array();
  for (std::size_t j = 0; j < top; ++j) {
    std::size_t f = order[j];
    double y = 40 + rowh * static_cast<double>(j);
    svg.text(8, y + 4, names[f], 10);
    for (const auto& e : report["explanations"]) {
      double phi = e["shap"]["phi"][f].get<double>();
      // color encodes the feature value at the instance when present
      double jy = y + (jitter.uniform() - 0.5) * (rowh - 10);
      svg.circle(sx(phi), jy, 3.0, phi >= 0 ? kRed : kBlue);
      points.push_back(json{{"feature", names[f]}, {"phi", phi}});
    }
  }
  return {svg.finish(), json{{"kind", "summary"}, {"points", points}}};
}

PlotOutput render_importance(const json& report) {
  std::vector<std::string> names;
  std::vector<double> vals;
  if (report.contains("explanations") && !report["explanations"].empty() &&
      report["explanations"][0].contains("shap")) {
    names = report["feature_names"].get<std::vector<std::string>>();
    vals.assign(names.size(), 0.0);
    std::size_t count = 0;
    for (const auto& e : report["explanations"]) {
      auto phi = e["shap"]["phi"].get<std::vector<double>>();
      for (std::size_t i = 0; i < names.size(); ++i) vals[i] += std::abs(phi[i]);
      ++count;
    }
    for (double& v : vals) v /= static_cast<double>(count);
  } else if (report.contains("model") && report["model"]["params"].contains("importance")) {
    names = report["feature_names"].get<std::vector<std::string>>();
    vals = report["model"]["params"]["importance"].get<std::vector<double>>();
  } else {
    throw DataError("report carries neither SHAP attributions nor tree importance");
  }

  auto order = order_by_abs(vals);
  const std::size_t top = std::min<std::size_t>(10, order.size());
  const double W = 720, rowh = 24, H = 50 + rowh * static_cast<double>(top);
  const double x0 = 220, x1 = W - 40;
  double vmax = std::max(1e-12, vals[order[0]]);

  SvgWriter svg(W, H);
  json bars = json::array();
  for (std::size_t j = 0; j < top; ++j) {
    std::size_t f = order[j];
    double y = 30 + rowh * static_cast<double>(j);
    svg.text(8, y + rowh - 10, names[f], 10);
    svg.rect(x0, y, (x1 - x0) * vals[f] / vmax, rowh - 6, kRed);
    bars.push_back(json{{"feature", names[f]}, {"value", vals[f]}});
  }
  return {svg.finish(), json{{"kind", "importance"}, {"bars", bars}}};
}

PlotOutput render_bar_compare(const json& report) {
  if (!report.contains("comparison"))
    throw DataError("report carries no comparison table; build one with the report command");
  const json& rows = report["comparison"];
  const std::size_t n = rows.size();
  const double W = 80.0 * static_cast<double>(n) * 2 + 120, H = 280;
  const double y0 = 230, bar_h_max = 180;

  SvgWriter svg(W, H);
  json bars = json::array();
  double x = 60;
  for (const auto& row : rows) {
    double acc = row["accuracy"].get<double>();
    double rec = row["recall"].get<double>();
    svg.rect(x, y0 - bar_h_max * acc, 30, bar_h_max * acc, kBlue);
    svg.rect(x + 34, y0 - bar_h_max * rec, 30, bar_h_max * rec, kRed);
    svg.text(x + 32, y0 + 16, row["name"].get<std::string>(), 10, "middle");
    bars.push_back(row);
    x += 140;
  }
  svg.text(10, 20, "accuracy (blue) / recall (red)", 11);
  return {svg.finish(), json{{"kind", "bar-compare"}, {"rows", bars}}};
}

PlotOutput render_knn_curve(const json& report) {
  if (!report.contains("knn_sweep"))
    throw DataError("report carries no knn sweep data");
  auto acc = report["knn_sweep"]["accuracy_per_k"].get<std::vector<double>>();
  const double W = 640, H = 320, x0 = 60, x1 = W - 30, y0 = H - 40, y1 = 30;
  double amin = *std::min_element(acc.begin(), acc.end());
  double amax = *std::max_element(acc.begin(), acc.end());
  double span = std::max(amax - amin, 1e-6);
  amin -= 0.1 * span;
  amax += 0.1 * span;

  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    double x = x0 + (x1 - x0) * static_cast<double>(i) / std::max<std::size_t>(acc.size() - 1, 1);
    double y = y0 - (acc[i] - amin) / (amax - amin) * (y0 - y1);
    pts.push_back({x, y});
  }
  SvgWriter svg(W, H);
  svg.line(x0, y0, x1, y0, "#333");
  svg.line(x0, y0, x0, y1, "#333");
  svg.polyline(pts, kBlue);
  for (auto& [x, y] : pts) svg.circle(x, y, 2.5, kBlue);
  svg.text(0.5 * (x0 + x1), H - 10, "k", 11, "middle");
  svg.text(12, 0.5 * (y0 + y1), "accuracy", 11);
  return {svg.finish(),
          json{{"kind", "knn-curve"},
               {"accuracy_per_k", acc},
               {"best_k", report["knn_sweep"]["best_k"]}}};
}

}  // namespace

PlotOutput render_plot_data(const json& report, PlotKind kind) {
  switch (kind) {
    case PlotKind::force: return render_force(report);
    case PlotKind::waterfall: return render_waterfall(report);
    case PlotKind::summary: return render_summary(report);
    case PlotKind::importance: return render_importance(report);
    case PlotKind::bar_compare: return render_bar_compare(report);
    default: return render_knn_curve(report);
  }
}

}  // namespace xmlkit

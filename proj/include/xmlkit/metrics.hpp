#pragma once

#include <vector>

#include "xmlkit/core.hpp"

namespace xmlkit {

struct ConfusionMatrix {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  std::size_t total() const { return tp + tn + fp + fn; }
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double roc_auc = 0.0;  // filled separately when scores are available
};

ConfusionMatrix confusion(const LabelVector& y_true, const LabelVector& y_pred);

// Accuracy/precision/recall/F1 from counts. Degenerate conventions:
// precision = 1 when tp+fp == 0, recall = 0 when tp+fn == 0, f1 = 0 when
// precision+recall == 0. roc_auc is left at 0.
MetricsReport classification_report(const ConfusionMatrix& cm);

// Rank-based (Mann-Whitney) AUC with average ranks for ties.
double roc_auc(const LabelVector& y_true, const std::vector<double>& scores);

}  // namespace xmlkit

#include "xmlkit/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace xmlkit {

ConfusionMatrix confusion(const LabelVector& y_true, const LabelVector& y_pred) {
  if (y_true.size() != y_pred.size()) throw DataError("label vector length mismatch");
  if (y_true.size() == 0) throw DataError("empty label vectors");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    int t = y_true.labels[i], p = y_pred.labels[i];
    if (t == 1 && p == 1) ++cm.tp;
    else if (t == 0 && p == 0) ++cm.tn;
    else if (t == 0 && p == 1) ++cm.fp;
    else ++cm.fn;
  }
  return cm;
}

MetricsReport classification_report(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("empty confusion matrix");
  MetricsReport m;
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  m.precision = (cm.tp + cm.fp == 0)
                    ? 1.0
                    : static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  m.recall = (cm.tp + cm.fn == 0)
                 ? 0.0
                 : static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  m.f1 = (m.precision + m.recall == 0.0)
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

double roc_auc(const LabelVector& y_true, const std::vector<double>& scores) {
  if (y_true.size() != scores.size()) throw DataError("label/score length mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int y : y_true.labels) n_pos += static_cast<std::size_t>(y);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DataError("roc_auc needs both classes present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tie groups, then sum positive ranks.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t t = i; t < j; ++t)
      if (y_true.labels[order[t]] == 1) rank_sum_pos += avg_rank;
    i = j;
  }
  return (rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1)) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace xmlkit

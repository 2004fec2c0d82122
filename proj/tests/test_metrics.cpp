#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xmlkit/core.hpp"
#include "xmlkit/metrics.hpp"

using namespace xmlkit;

TEST_CASE("confusion counts") {
  ConfusionMatrix cm = confusion(LabelVector{{1, 1, 0, 0}}, LabelVector{{1, 1, 0, 0}});
  CHECK(cm.tp == 2);
  CHECK(cm.tn == 2);
  CHECK(cm.fp == 0);
  CHECK(cm.fn == 0);

  cm = confusion(LabelVector{{1, 0}}, LabelVector{{0, 1}});
  CHECK(cm.tp == 0);
  CHECK(cm.tn == 0);
  CHECK(cm.fp == 1);
  CHECK(cm.fn == 1);

  CHECK_THROWS_AS(confusion(LabelVector{{1}}, LabelVector{{1, 0}}), DataError);
  CHECK_THROWS_AS(confusion(LabelVector{{}}, LabelVector{{}}), DataError);
}

TEST_CASE("confusion matches brute-force tally on random vectors") {
  Rng rng(17);
  LabelVector t, p;
  for (int i = 0; i < 200; ++i) {
    t.labels.push_back(rng.uniform() < 0.5 ? 0 : 1);
    p.labels.push_back(rng.uniform() < 0.5 ? 0 : 1);
  }
  ConfusionMatrix cm = confusion(t, p);
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      if (i == j) {
        tp += t.labels[i] == 1 && p.labels[i] == 1;
        tn += t.labels[i] == 0 && p.labels[i] == 0;
        fp += t.labels[i] == 0 && p.labels[i] == 1;
        fn += t.labels[i] == 1 && p.labels[i] == 0;
      }
  CHECK(cm.tp == tp);
  CHECK(cm.tn == tn);
  CHECK(cm.fp == fp);
  CHECK(cm.fn == fn);
}

TEST_CASE("classification report formulas") {
  MetricsReport m = classification_report({2, 2, 0, 0});
  CHECK(m.accuracy == 1.0);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.f1 == 1.0);

  // worked example, evaluated by hand
  m = classification_report({50, 80, 10, 3});
  CHECK(m.accuracy == doctest::Approx(130.0 / 143.0).epsilon(1e-12));
  CHECK(m.precision == doctest::Approx(50.0 / 60.0).epsilon(1e-12));
  CHECK(m.recall == doctest::Approx(50.0 / 53.0).epsilon(1e-12));
  double p = 50.0 / 60.0, r = 50.0 / 53.0;
  CHECK(m.f1 == doctest::Approx(2 * p * r / (p + r)).epsilon(1e-12));
  CHECK(m.f1 == doctest::Approx(0.8850).epsilon(1e-4));
}

TEST_CASE("degenerate conventions") {
  MetricsReport m = classification_report({0, 10, 0, 0});
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 0.0);
  CHECK(m.f1 == 0.0);
  CHECK_THROWS_AS(classification_report({0, 0, 0, 0}), DataError);
}

TEST_CASE("auc perfect separation and pure ties") {
  CHECK(roc_auc(LabelVector{{1, 1, 0, 0}}, {0.9, 0.8, 0.2, 0.1}) == 1.0);
  CHECK(roc_auc(LabelVector{{1, 0, 1, 0}}, {0.5, 0.5, 0.5, 0.5}) == 0.5);
  CHECK_THROWS_AS(roc_auc(LabelVector{{1, 1}}, {0.1, 0.2}), DataError);
}

TEST_CASE("auc equals pairwise oracle on random data") {
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    LabelVector y;
    std::vector<double> s;
    for (int i = 0; i < 50; ++i) {
      y.labels.push_back(rng.uniform() < 0.4 ? 1 : 0);
      // quantized scores so ties occur
      s.push_back(std::floor(rng.uniform() * 10) / 10.0);
    }
    if (std::count(y.labels.begin(), y.labels.end(), 1) == 0 ||
        std::count(y.labels.begin(), y.labels.end(), 0) == 0)
      continue;
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j)
        if (y.labels[i] == 1 && y.labels[j] == 0) {
          pairs += 1;
          if (s[i] > s[j]) wins += 1;
          else if (s[i] == s[j]) wins += 0.5;
        }
    CHECK(roc_auc(y, s) == doctest::Approx(wins / pairs).epsilon(1e-12));
  }
}

TEST_CASE("auc complement under score negation") {
  Rng rng(8);
  LabelVector y;
  std::vector<double> s, neg;
  for (int i = 0; i < 40; ++i) {
    y.labels.push_back(i % 3 == 0 ? 1 : 0);
    s.push_back(rng.uniform());  // continuous, ties have probability 0
    neg.push_back(-s.back());
  }
  CHECK(roc_auc(y, s) + roc_auc(y, neg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("label swap leaves accuracy unchanged; metrics stay in [0,1]") {
  Rng rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    ConfusionMatrix cm{rng.uniform_index(20), rng.uniform_index(20), rng.uniform_index(20),
                       rng.uniform_index(20)};
    if (cm.total() == 0) continue;
    MetricsReport m = classification_report(cm);
    // swap both true and predicted labels: tp<->tn, fp<->fn
    MetricsReport sw = classification_report({cm.tn, cm.tp, cm.fn, cm.fp});
    CHECK(m.accuracy == sw.accuracy);
    for (double v : {m.accuracy, m.precision, m.recall, m.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

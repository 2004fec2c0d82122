#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xmlkit/dataset.hpp"
#include "xmlkit/knn.hpp"

using namespace xmlkit;

TEST_CASE("euclidean distance") {
  CHECK(euclidean({0, 0}, {3, 4}) == 5.0);
  std::vector<double> x{1.5, -2.0, 0.25};
  CHECK(euclidean(x, x) == 0.0);
  CHECK_THROWS_AS(euclidean({1}, {1, 2}), DataError);
}

TEST_CASE("euclidean matches extended-precision accumulation") {
  Rng rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a(30), b(30);
    for (int i = 0; i < 30; ++i) {
      a[static_cast<std::size_t>(i)] = rng.uniform() * 100 - 50;
      b[static_cast<std::size_t>(i)] = rng.uniform() * 100 - 50;
    }
    long double ss = 0.0L;
    for (int i = 0; i < 30; ++i) {
      long double d = static_cast<long double>(a[static_cast<std::size_t>(i)]) -
                      static_cast<long double>(b[static_cast<std::size_t>(i)]);
      ss += d * d;
    }
    double want = static_cast<double>(sqrtl(ss));
    CHECK(euclidean(a, b) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("exact match dominates with k=1") {
  Dataset d;
  d.x = {3, 1, {0.0, 0.5, 1.0}, {}};
  d.y.labels = {0, 1, 0};
  KnnModel m(d, 1);
  CHECK(m.predict_proba({0.5}) == 1.0);
  CHECK(m.predict_proba({0.0}) == 0.0);
}

TEST_CASE("equal distances reduce to vote fraction") {
  Dataset d;
  d.x = {3, 2, {1, 0, -1, 0, 0, 1}, {}};  // all at distance 1 from origin
  d.y.labels = {1, 1, 0};
  KnnModel m(d, 3);
  CHECK(m.predict_proba({0.0, 0.0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("knn agrees with brute-force neighbor oracle") {
  Rng rng(44);
  Dataset d;
  d.x = {50, 3, {}, {}};
  for (int i = 0; i < 150; ++i) d.x.values.push_back(rng.uniform());
  for (int i = 0; i < 50; ++i) d.y.labels.push_back(rng.uniform() < 0.5 ? 0 : 1);
  KnnModel m(d, 4);

  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> q{rng.uniform(), rng.uniform(), rng.uniform()};
    // independent oracle: full sort by (distance, index), then weighted vote
    std::vector<std::pair<double, std::size_t>> nb;
    for (std::size_t i = 0; i < 50; ++i) nb.push_back({euclidean(q, d.x.row(i)), i});
    std::sort(nb.begin(), nb.end());
    double wsum = 0, wpos = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      double w = 1.0 / (nb[i].first + 1e-12);
      wsum += w;
      if (d.y.labels[nb[i].second] == 1) wpos += w;
    }
    CHECK(m.predict_proba(q) == doctest::Approx(wpos / wsum).epsilon(1e-12));
  }
}

TEST_CASE("k equal to training size gives global weighted share") {
  Rng rng(7);
  Dataset d;
  d.x = {20, 2, {}, {}};
  for (int i = 0; i < 40; ++i) d.x.values.push_back(rng.uniform());
  for (int i = 0; i < 20; ++i) d.y.labels.push_back(i % 2);
  KnnModel m(d, 20);
  std::vector<double> q{0.3, 0.7};
  double wsum = 0, wpos = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    double w = 1.0 / (euclidean(q, d.x.row(i)) + 1e-12);
    wsum += w;
    if (d.y.labels[i] == 1) wpos += w;
  }
  CHECK(m.predict_proba(q) == doctest::Approx(wpos / wsum).epsilon(1e-12));
}

TEST_CASE("uniform feature scaling preserves predicted class") {
  Rng rng(3);
  Dataset d;
  d.x = {30, 2, {}, {}};
  for (int i = 0; i < 60; ++i) d.x.values.push_back(rng.uniform());
  for (int i = 0; i < 30; ++i) d.y.labels.push_back(rng.uniform() < 0.5 ? 0 : 1);
  Dataset scaled = d;
  for (double& v : scaled.x.values) v *= 3.0;

  KnnModel a(d, 5), b(scaled, 5);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> q{rng.uniform(), rng.uniform()};
    std::vector<double> q3{q[0] * 3.0, q[1] * 3.0};
    CHECK(a.predict(q) == b.predict(q3));
  }
}

TEST_CASE("probability always in [0,1]") {
  Rng rng(10);
  Dataset d;
  d.x = {25, 4, {}, {}};
  for (int i = 0; i < 100; ++i) d.x.values.push_back(rng.uniform());
  for (int i = 0; i < 25; ++i) d.y.labels.push_back(rng.uniform() < 0.3 ? 0 : 1);
  for (std::size_t k : {1UL, 3UL, 10UL, 25UL}) {
    KnnModel m(d, k);
    for (int rep = 0; rep < 25; ++rep) {
      std::vector<double> q(4);
      for (double& v : q) v = rng.uniform() * 10 - 5;
      double p = m.predict_proba(q);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("k bounds enforced") {
  Dataset d;
  d.x = {2, 1, {0, 1}, {}};
  d.y.labels = {0, 1};
  CHECK_THROWS_AS(KnnModel(d, 0), DataError);
  CHECK_THROWS_AS(KnnModel(d, 3), DataError);
}

TEST_CASE("sweep picks k=1 when 1-nn is perfect") {
  // two tight, well-separated clusters
  Dataset d;
  d.x = {20, 1, {}, {}};
  for (int i = 0; i < 10; ++i) d.x.values.push_back(0.0 + 0.01 * i);
  for (int i = 0; i < 10; ++i) d.x.values.push_back(10.0 + 0.01 * i);
  for (int i = 0; i < 10; ++i) d.y.labels.push_back(0);
  for (int i = 0; i < 10; ++i) d.y.labels.push_back(1);
  KSweepResult r = sweep_k(d, 5, 5, 1);
  CHECK(r.best_k == 1);
  CHECK(r.accuracy_per_k[0] == 1.0);
}

TEST_CASE("sweep deterministic") {
  Dataset d = load_wdbc_csv(WDBC_CSV_PATH);
  KSweepResult a = sweep_k(d, 8, 5, 3);
  KSweepResult b = sweep_k(d, 8, 5, 3);
  CHECK(a.best_k == b.best_k);
  CHECK(a.accuracy_per_k == b.accuracy_per_k);
}

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "tpnav/metrics.hpp"

using namespace tpnav;

TEST_CASE("rmse and mae hand values") {
  const std::vector<double> zeros{0, 0}, v{3, 4};
  REQUIRE(rmse(v, v) == 0.0);
  REQUIRE(mae(v, v) == 0.0);
  REQUIRE(rmse(zeros, v) == Catch::Approx(std::sqrt(12.5)).epsilon(1e-12));
  REQUIRE(mae(zeros, v) == Catch::Approx(3.5).epsilon(1e-12));
  REQUIRE_THROWS_AS(rmse(std::vector<double>{1}, v), std::invalid_argument);
}

TEST_CASE("rmse >= mae >= 0 on random pairs") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(1, 40);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rng.uniform(-50, 50);
      b[i] = rng.uniform(-50, 50);
    }
    const double r = rmse(a, b), m = mae(a, b);
    REQUIRE(m >= 0.0);
    REQUIRE(r >= m - 1e-12);
  }
}

TEST_CASE("acc: identity, zero prediction, scale consistency") {
  const std::vector<double> v{3, 4, 12};
  REQUIRE(acc(v, v) == Catch::Approx(1.0));
  const std::vector<double> zeros{0, 0, 0};
  REQUIRE(acc(zeros, v) == Catch::Approx(0.0));
  REQUIRE_THROWS_AS(acc(v, zeros), DataError);

  Rng rng(4);
  std::vector<double> a(10), b(10), a2(10), b2(10);
  for (int i = 0; i < 10; ++i) {
    a[i] = rng.uniform(1, 60);
    b[i] = rng.uniform(1, 60);
    a2[i] = -2.5 * a[i];
    b2[i] = -2.5 * b[i];
  }
  REQUIRE(acc(a, b) == Catch::Approx(acc(a2, b2)).epsilon(1e-12));
}

TEST_CASE("precision/recall/f1 hand values") {
  // TP=2, FP=1, FN=3 over 8 items
  const std::vector<std::uint8_t> pred{1, 1, 1, 0, 0, 0, 0, 0};
  const std::vector<std::uint8_t> actual{1, 1, 0, 1, 1, 1, 0, 0};
  const PrfResult r = precision_recall_f1(pred, actual);
  REQUIRE(r.precision == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
  REQUIRE(r.recall == Catch::Approx(0.4).epsilon(1e-12));
  REQUIRE(r.f1 == Catch::Approx(0.5).epsilon(1e-12));

  const PrfResult perfect = precision_recall_f1(actual, actual);
  REQUIRE(perfect.precision == 1.0);
  REQUIRE(perfect.recall == 1.0);
  REQUIRE(perfect.f1 == 1.0);

  const std::vector<std::uint8_t> none{0, 0, 0, 0, 0, 0, 0, 0};
  const PrfResult undef = precision_recall_f1(none, actual);
  REQUIRE_FALSE(undef.precision_defined);
  REQUIRE(undef.precision == 0.0);
  const PrfResult no_pos = precision_recall_f1(none, none);
  REQUIRE_FALSE(no_pos.recall_defined);
}

TEST_CASE("roc_auc: perfect separation and total ties") {
  const std::vector<double> ordered{0.9, 0.8, 0.7, 0.2, 0.1};
  const std::vector<std::uint8_t> labels{1, 1, 1, 0, 0};
  REQUIRE(roc_auc(ordered, labels).auc == Catch::Approx(1.0));

  const std::vector<double> flat{0.5, 0.5, 0.5, 0.5, 0.5};
  const RocCurve tied = roc_auc(flat, labels);
  REQUIRE(tied.auc == Catch::Approx(0.5));
  REQUIRE(tied.points.size() == 2);  // (0,0) then the single tie group at (1,1)

  REQUIRE_THROWS_AS(roc_auc(ordered, std::vector<std::uint8_t>{1, 1, 1, 1, 1}), DataError);
}

TEST_CASE("roc curve endpoints and monotonicity") {
  Rng rng(77);
  std::vector<double> scores(60);
  std::vector<std::uint8_t> labels(60);
  for (int i = 0; i < 60; ++i) {
    scores[i] = rng.uniform_int(0, 9) / 10.0;  // force ties
    labels[i] = rng.uniform() < 0.4 ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  const RocCurve c = roc_auc(scores, labels);
  REQUIRE(c.points.front() == std::pair<double, double>{0.0, 0.0});
  REQUIRE(c.points.back() == std::pair<double, double>{1.0, 1.0});
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    REQUIRE(c.points[i].first >= c.points[i - 1].first);
    REQUIRE(c.points[i].second >= c.points[i - 1].second);
  }
}

TEST_CASE("AUC equals the pairwise Wilcoxon-Mann-Whitney statistic") {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(5, 200);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (int i = 0; i < n; ++i) {
      // quantized scores so tie handling is exercised hard
      scores[i] = rng.uniform_int(0, 20) / 20.0;
      labels[i] = rng.uniform() < 0.5 ? 1 : 0;
    }
    labels[0] = 1;
    labels[n - 1] = 0;
    const double auc = roc_auc(scores, labels).auc;
    const double wmw = testsupport::pairwise_auc(scores, labels);
    REQUIRE(auc == Catch::Approx(wmw).margin(1e-12));
  }
}

TEST_CASE("pearson hand values and affine invariance") {
  const std::vector<double> x{1, 2, 3};
  REQUIRE(pearson(x, std::vector<double>{3, 5, 7}) == Catch::Approx(1.0));   // y = 2x+1
  REQUIRE(pearson(x, std::vector<double>{-1, -2, -3}) == Catch::Approx(-1.0));
  REQUIRE(pearson(x, std::vector<double>{1, 3, 2}) == Catch::Approx(0.5).epsilon(1e-12));
  REQUIRE_THROWS_AS(pearson(x, std::vector<double>{2, 2, 2}), DataError);

  Rng rng(9);
  std::vector<double> a(20), b(20), a2(20);
  for (int i = 0; i < 20; ++i) {
    a[i] = rng.uniform(-5, 5);
    b[i] = rng.uniform(-5, 5);
    a2[i] = 3.7 * a[i] + 11.0;
  }
  REQUIRE(pearson(a, b) == Catch::Approx(pearson(a2, b)).epsilon(1e-9));
}

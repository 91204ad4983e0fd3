#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "tpnav/gbtree.hpp"
#include "tpnav/metrics.hpp"
#include "tpnav/synthetic.hpp"

using namespace tpnav;

namespace {

std::vector<WindowSample> two_point_set() {
  WindowSample a, b;
  a.features = {0.0};
  a.target = 0.0;
  b.features = {1.0};
  b.target = 10.0;
  return {a, b};
}

std::vector<WindowSample> field_samples(const SpeedField& field, int road, const WindowSpec& spec) {
  return make_windows(field, road, spec);
}

double train_rmse_with_rounds(const std::vector<WindowSample>& train, const BoostedEnsemble& model,
                              int rounds) {
  std::vector<double> pred, actual;
  for (const auto& s : train) {
    pred.push_back(model.predict_partial(s.features, rounds));
    actual.push_back(s.target);
  }
  return rmse(pred, actual);
}

}  // namespace

TEST_CASE("rounds=0 predicts the target mean everywhere") {
  BoostParams p;
  p.rounds = 0;
  const auto model = train_regressor(two_point_set(), p);
  REQUIRE(model.trees.empty());
  REQUIRE(model.base_score == Catch::Approx(5.0));
  REQUIRE(model.predict(std::vector<double>{0.3}) == Catch::Approx(5.0));
  REQUIRE(model.predict(std::vector<double>{-100.0}) == Catch::Approx(5.0));
}

TEST_CASE("hand oracle: one stump on two points reproduces targets exactly") {
  BoostParams p;
  p.rounds = 1;
  p.max_depth = 1;
  p.lambda = 0.0;
  p.gamma = 0.0;
  p.eta = 1.0;
  const auto model = train_regressor(two_point_set(), p);
  REQUIRE(model.trees.size() == 1);
  const auto& tree = model.trees[0];
  REQUIRE(tree.nodes[0].feature == 0);
  REQUIRE(tree.nodes[0].threshold == Catch::Approx(0.5));
  // leaf weights: -G/(H+lambda) with g = base - y = {5, -5}, h = 1
  REQUIRE(tree.nodes[tree.nodes[0].left].weight == Catch::Approx(-5.0));
  REQUIRE(tree.nodes[tree.nodes[0].right].weight == Catch::Approx(5.0));
  REQUIRE(model.predict(std::vector<double>{0.0}) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(model.predict(std::vector<double>{1.0}) == Catch::Approx(10.0).margin(1e-12));
}

TEST_CASE("training RMSE is nonincreasing every round (3 corpora)") {
  int corpus_id = 0;
  for (Profile profile : {Profile::Smooth, Profile::RushHour, Profile::Volatile}) {
    const auto corpus = gen_synthetic(2, 400, 100 + corpus_id++, profile);
    const auto samples = field_samples(corpus.field, 0, WindowSpec{5, 6});
    BoostParams p;
    p.rounds = 50;
    p.gamma = 0.0;
    const auto model = train_regressor(samples, p);
    double prev = train_rmse_with_rounds(samples, model, 0);
    for (int k = 1; k <= 50; ++k) {
      const double cur = train_rmse_with_rounds(samples, model, k);
      REQUIRE(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("leaf weights recompute as -G/(H+lambda) post hoc") {
  const auto corpus = gen_synthetic(2, 300, 7, Profile::RushHour);
  const auto samples = field_samples(corpus.field, 1, WindowSpec{4, 6});
  BoostParams p;
  p.rounds = 8;
  p.lambda = 1.3;
  const auto model = train_regressor(samples, p);

  // replay boosting: before each round, per-sample gradients at current score
  std::vector<double> score(samples.size(), model.base_score);
  for (const auto& tree : model.trees) {
    std::map<int, std::pair<double, double>> leaf_gh;  // leaf node -> (G, H)
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const int leaf = tree.leaf_index(samples[i].features);
      leaf_gh[leaf].first += score[i] - samples[i].target;
      leaf_gh[leaf].second += 1.0;
    }
    for (const auto& [leaf, gh] : leaf_gh)
      REQUIRE(tree.nodes[leaf].weight ==
              Catch::Approx(-gh.first / (gh.second + p.lambda)).margin(1e-10));
    for (std::size_t i = 0; i < samples.size(); ++i)
      score[i] += p.eta * tree.eval(samples[i].features);
  }
}

TEST_CASE("huge gamma degenerates every tree to a single leaf") {
  const auto corpus = gen_synthetic(2, 256, 3, Profile::Volatile);
  const auto samples = field_samples(corpus.field, 0, WindowSpec{3, 4});
  BoostParams p;
  p.rounds = 5;
  p.gamma = 1e9;
  const auto model = train_regressor(samples, p);
  for (const auto& tree : model.trees) {
    REQUIRE(tree.nodes.size() == 1);
    REQUIRE(tree.leaf_count() == 1);
  }
}

TEST_CASE("determinism: identical data and params give identical model bytes") {
  const auto corpus = gen_synthetic(2, 256, 19, Profile::RushHour);
  const auto samples = field_samples(corpus.field, 0, WindowSpec{5, 7});
  BoostParams p;
  p.rounds = 12;
  const auto a = train_regressor(samples, p);
  const auto b = train_regressor(samples, p);
  REQUIRE(ensemble_string(a) == ensemble_string(b));
}

TEST_CASE("serialization: byte-exact reload") {
  const auto corpus = gen_synthetic(2, 256, 23, Profile::Volatile);
  const auto samples = field_samples(corpus.field, 0, WindowSpec{5, 7});
  BoostParams p;
  p.rounds = 10;
  const auto model = train_regressor(samples, p);
  const std::string first = ensemble_string(model);
  std::istringstream in(first);
  const auto reloaded = load_ensemble(in);
  REQUIRE(ensemble_string(reloaded) == first);
  for (const auto& s : samples)
    REQUIRE(reloaded.predict(s.features) == model.predict(s.features));
}

TEST_CASE("classifier: log-loss decreases every round on separable data") {
  std::vector<WindowSample> train;
  for (int i = 0; i < 20; ++i) {
    WindowSample s;
    s.features = {static_cast<double>(i)};
    s.target = i < 10 ? 0.0 : 1.0;
    train.push_back(s);
  }
  BoostParams p;
  p.rounds = 20;
  p.eta = 0.5;
  const auto model = train_classifier(train, p);

  auto log_loss = [&](int rounds) {
    double total = 0.0;
    for (const auto& s : train) {
      const double prob = sigmoid(model.predict_partial(s.features, rounds));
      total += s.target == 1.0 ? -std::log(prob) : -std::log(1.0 - prob);
    }
    return total / static_cast<double>(train.size());
  };
  double prev = log_loss(0);
  for (int k = 1; k <= 20; ++k) {
    const double cur = log_loss(k);
    REQUIRE(cur < prev);
    prev = cur;
  }
}

TEST_CASE("classifier: probability output strictly inside (0,1)") {
  const auto corpus = gen_synthetic(2, 400, 31, Profile::RushHour);
  auto samples = field_samples(corpus.field, 0, WindowSpec{5, 6});
  const auto labels = label_congestion(corpus.field, 0, CongestionConfig{25.0}, IndexRange{0, 400});
  for (auto& s : samples) s.target = labels.labels[s.t + 6];
  BoostParams p;
  p.rounds = 30;
  const auto model = train_classifier(samples, p);
  for (const auto& s : samples) {
    const double prob = model.predict_proba(s.features);
    REQUIRE(prob > 0.0);
    REQUIRE(prob < 1.0);
  }
}

TEST_CASE("classifier: balanced coin-flip labels give chance-level AUC") {
  Rng rng(40);
  std::vector<WindowSample> train, test;
  for (int i = 0; i < 400; ++i) {
    WindowSample s;
    s.features = {rng.uniform(0, 1), rng.uniform(0, 1)};
    s.target = rng.uniform() < 0.5 ? 0.0 : 1.0;
    (i < 300 ? train : test).push_back(s);
  }
  BoostParams p;
  p.rounds = 10;
  p.max_depth = 1;
  const auto model = train_classifier(train, p);
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  for (const auto& s : test) {
    scores.push_back(model.predict_proba(s.features));
    labels.push_back(static_cast<std::uint8_t>(s.target));
  }
  const double auc = roc_auc(scores, labels).auc;
  REQUIRE(auc > 0.4);
  REQUIRE(auc < 0.6);
}

TEST_CASE("error paths: empty set, inconsistent features, single class, length mismatch") {
  REQUIRE_THROWS_AS(train_regressor({}, BoostParams{}), DataError);

  auto samples = two_point_set();
  samples[1].features = {1.0, 2.0};
  REQUIRE_THROWS_AS(train_regressor(samples, BoostParams{}), std::invalid_argument);

  std::vector<WindowSample> single_class = two_point_set();
  single_class[0].target = 1.0;
  single_class[1].target = 1.0;
  REQUIRE_THROWS_AS(train_classifier(single_class, BoostParams{}), DataError);

  const auto model = train_regressor(two_point_set(), BoostParams{});
  REQUIRE_THROWS_AS(model.predict(std::vector<double>{1.0, 2.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(model.predict_proba(std::vector<double>{1.0}), std::invalid_argument);
}

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "tpnav/mlp.hpp"

using namespace tpnav;

namespace {

struct Batch {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
};

Batch random_batch(Rng& rng, int n, int dim) {
  Batch b;
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(dim);
    for (auto& v : row) v = rng.uniform();
    b.x.push_back(std::move(row));
    b.y.push_back(rng.uniform(0.1, 0.9));
  }
  return b;
}

// central differences over every weight and bias
void check_gradients(const MlpNet& net, const Batch& batch, double step, double tol) {
  const MlpGradients g = mlp_gradients(net, batch.x, batch.y);
  MlpNet probe = net;
  for (int l = 0; l < 3; ++l) {
    for (std::size_t i = 0; i < net.w[l].size(); ++i) {
      probe.w[l][i] = net.w[l][i] + step;
      const double up = mlp_loss(probe, batch.x, batch.y);
      probe.w[l][i] = net.w[l][i] - step;
      const double down = mlp_loss(probe, batch.x, batch.y);
      probe.w[l][i] = net.w[l][i];
      const double numeric = (up - down) / (2 * step);
      const double denom = std::max({std::abs(numeric), std::abs(g.w[l][i]), 1e-8});
      REQUIRE(std::abs(numeric - g.w[l][i]) / denom < tol);
    }
    for (std::size_t i = 0; i < net.b[l].size(); ++i) {
      probe.b[l][i] = net.b[l][i] + step;
      const double up = mlp_loss(probe, batch.x, batch.y);
      probe.b[l][i] = net.b[l][i] - step;
      const double down = mlp_loss(probe, batch.x, batch.y);
      probe.b[l][i] = net.b[l][i];
      const double numeric = (up - down) / (2 * step);
      const double denom = std::max({std::abs(numeric), std::abs(g.b[l][i]), 1e-8});
      REQUIRE(std::abs(numeric - g.b[l][i]) / denom < tol);
    }
  }
}

}  // namespace

TEST_CASE("zero-initialized net predicts sigmoid(output bias) regardless of input") {
  const MlpNet net = MlpNet::zeros(3, 4, 2);
  REQUIRE(net.forward(std::vector<double>{0.1, 0.9, 0.4}) == Catch::Approx(0.5));
  REQUIRE(net.forward(std::vector<double>{-7, 3, 100}) == Catch::Approx(0.5));

  // zero-centered targets: the untrained model's raw prediction sits at the
  // midpoint of the target range, which is the zero output bias
  std::vector<std::vector<double>> x{{0.0}, {1.0}};
  std::vector<double> y{-2.0, 2.0};
  MlpParams p;
  p.epochs = 1;
  p.learning_rate = 1e-12;
  p.seed = 1;
  MlpModel m = train_mlp(x, y, p);
  m.net = MlpNet::zeros(1, p.hidden1, p.hidden2);
  REQUIRE(m.predict(std::vector<double>{0.5}) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("gradients match central finite differences on random configurations") {
  Rng rng(77);
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    const MlpNet net = MlpNet::seeded(4, 6, 5, seed);
    const Batch batch = random_batch(rng, 12, 4);
    check_gradients(net, batch, 1e-5, 1e-4);
  }
}

TEST_CASE("zero-error batch yields zero gradients") {
  const MlpNet net = MlpNet::seeded(2, 4, 3, 5);
  Batch batch;
  Rng rng(3);
  for (int i = 0; i < 6; ++i) {
    std::vector<double> row{rng.uniform(), rng.uniform()};
    batch.y.push_back(net.forward(row));  // target == output
    batch.x.push_back(std::move(row));
  }
  const MlpGradients g = mlp_gradients(net, batch.x, batch.y);
  REQUIRE(g.loss == Catch::Approx(0.0).margin(1e-18));
  for (int l = 0; l < 3; ++l) {
    for (double v : g.w[l]) REQUIRE(v == Catch::Approx(0.0).margin(1e-15));
    for (double v : g.b[l]) REQUIRE(v == Catch::Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("target scaling reflects into the unscaled gradient view") {
  // scaling all raw targets by c rescales the raw-space error: with the same
  // scaled-space state, d(raw error)/d(bias) grows by the target span factor
  std::vector<std::vector<double>> x{{0.0}, {0.5}, {1.0}};
  std::vector<double> y1{10.0, 20.0, 30.0};
  std::vector<double> y2{20.0, 40.0, 60.0};  // c = 2
  MlpParams p;
  p.epochs = 2;
  p.seed = 9;
  const MlpModel m1 = train_mlp(x, y1, p);
  const MlpModel m2 = train_mlp(x, y2, p);
  // identical scaled problems -> identical nets; only the unscaling differs
  for (int l = 0; l < 3; ++l) {
    REQUIRE(m1.net.w[l] == m2.net.w[l]);
    REQUIRE(m1.net.b[l] == m2.net.b[l]);
  }
  for (const auto& row : x)
    REQUIRE(m2.predict(row) == Catch::Approx(2.0 * m1.predict(row)).epsilon(1e-12));
}

TEST_CASE("training loss is nonincreasing under the halving schedule") {
  Rng rng(15);
  const Batch batch = random_batch(rng, 40, 3);
  MlpParams p;
  p.hidden1 = 8;
  p.hidden2 = 6;
  p.epochs = 300;
  p.learning_rate = 5.0;  // deliberately too hot; halving must tame it
  p.seed = 4;
  const MlpModel m = train_mlp(batch.x, batch.y, p);
  REQUIRE(m.loss_curve.size() == 301);
  for (std::size_t e = 1; e < m.loss_curve.size(); ++e)
    REQUIRE(m.loss_curve[e] <= m.loss_curve[e - 1] + 1e-15);
}

TEST_CASE("determinism: same seed and data give identical model bytes") {
  Rng rng(51);
  const Batch batch = random_batch(rng, 25, 3);
  MlpParams p;
  p.hidden1 = 6;
  p.hidden2 = 4;
  p.epochs = 50;
  p.seed = 12;
  const MlpModel a = train_mlp(batch.x, batch.y, p);
  const MlpModel b = train_mlp(batch.x, batch.y, p);
  REQUIRE(mlp_string(a) == mlp_string(b));
}

TEST_CASE("serialization round trip preserves predictions byte-exactly") {
  Rng rng(29);
  const Batch batch = random_batch(rng, 20, 4);
  MlpParams p;
  p.hidden1 = 5;
  p.hidden2 = 3;
  p.epochs = 40;
  p.seed = 2;
  const MlpModel m = train_mlp(batch.x, batch.y, p);
  const std::string text = mlp_string(m);
  std::istringstream in(text);
  const MlpModel r = load_mlp(in);
  REQUIRE(mlp_string(r) == text);
  for (const auto& row : batch.x) REQUIRE(r.predict(row) == m.predict(row));
}

TEST_CASE("degenerate constant feature is pinned with a count") {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    x.push_back({rng.uniform(), 42.0});  // second feature constant
    y.push_back(rng.uniform(1.0, 2.0));
  }
  MlpParams p;
  p.epochs = 5;
  const MlpModel m = train_mlp(x, y, p);
  REQUIRE(m.degenerate_features == 1);
  REQUIRE(m.scale_features(std::vector<double>{0.5, 42.0})[1] == 0.5);
}

TEST_CASE("predictions stay inside the recorded target range") {
  Rng rng(63);
  const Batch batch = random_batch(rng, 30, 2);
  std::vector<double> y;
  for (double v : batch.y) y.push_back(20.0 + 50.0 * v);
  MlpParams p;
  p.epochs = 30;
  const MlpModel m = train_mlp(batch.x, y, p);
  for (int trial = 0; trial < 100; ++trial) {
    // far outside the training distribution on purpose
    const double v = m.predict(std::vector<double>{rng.uniform(-10, 10), rng.uniform(-10, 10)});
    REQUIRE(v >= m.target_range.lo);
    REQUIRE(v <= m.target_range.hi);
    REQUIRE(v > 0.0);
  }
}

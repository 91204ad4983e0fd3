#include <catch2/catch_amalgamated.hpp>

#include "tpnav/common.hpp"
#include "tpnav/uncertainty.hpp"

using namespace tpnav;

TEST_CASE("sigma_mle hand values") {
  REQUIRE(sigma_mle(std::vector<double>{5, 5, 5}) == 0.0);
  REQUIRE(sigma_mle(std::vector<double>{1, 2, 3}) ==
          Catch::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  REQUIRE(sigma_mle(std::vector<double>{42.0}) == 0.0);  // single point
  REQUIRE_THROWS_AS(sigma_mle(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("sigma_mle: translation invariant, scales linearly") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 24);
    std::vector<double> x(n), shifted(n), scaled(n);
    const double c = rng.uniform(-20, 20);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform(0, 80);
      shifted[i] = x[i] + c;
      scaled[i] = c * x[i];
    }
    REQUIRE(sigma_mle(shifted) == Catch::Approx(sigma_mle(x)).margin(1e-9));
    REQUIRE(sigma_mle(scaled) == Catch::Approx(std::abs(c) * sigma_mle(x)).margin(1e-9));
  }
}

TEST_CASE("path_congestion_prob: products and edge cases") {
  REQUIRE(path_congestion_prob(std::vector<double>{0.3}) == Catch::Approx(0.3));
  REQUIRE(path_congestion_prob(std::vector<double>{0.5, 0.5}) == Catch::Approx(0.25));
  REQUIRE(path_congestion_prob(std::vector<double>{0.9, 0.9, 0.9, 0.9, 0.9}) ==
          Catch::Approx(0.59049).epsilon(1e-12));
  REQUIRE(path_congestion_prob(std::vector<double>{}) == 1.0);  // empty product
  REQUIRE_THROWS_AS(path_congestion_prob(std::vector<double>{1.2}), std::invalid_argument);
  REQUIRE_THROWS_AS(path_congestion_prob(std::vector<double>{-0.1}), std::invalid_argument);
}

TEST_CASE("path_congestion_prob: order invariant and bounded by the minimum") {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 8);
    std::vector<double> p(n);
    for (auto& v : p) v = rng.uniform();
    std::vector<double> shuffled = p;
    for (int i = n - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.uniform_int(0, i)]);
    REQUIRE(path_congestion_prob(p) == Catch::Approx(path_congestion_prob(shuffled)).margin(1e-15));
    REQUIRE(path_congestion_prob(p) <= *std::min_element(p.begin(), p.end()) + 1e-15);
  }
}

TEST_CASE("path_congestion_prob: complement-product alternative") {
  const std::vector<double> p{0.5, 0.5};
  REQUIRE(path_congestion_prob(p, PathCongestionMode::AnyCongested) == Catch::Approx(0.75));
  REQUIRE(path_congestion_prob(std::vector<double>{}, PathCongestionMode::AnyCongested) == 0.0);
}

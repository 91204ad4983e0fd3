#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "test_support.hpp"
#include "tpnav/csv.hpp"
#include "tpnav/signal.hpp"
#include "tpnav/synthetic.hpp"
#include "tpnav/windowing.hpp"

using namespace tpnav;

TEST_CASE("speed CSV: minimal well-formed input") {
  std::istringstream in("r0\n10.0\n12.0\n");
  const SpeedField f = parse_speed_csv(in);
  REQUIRE(f.n_roads() == 1);
  REQUIRE(f.n_steps() == 2);
  REQUIRE(f.speeds[0][0] == 10.0);
  REQUIRE(f.speeds[0][1] == 12.0);
}

TEST_CASE("speed CSV: METR-LA shaped dimensions") {
  std::string csv;
  for (int r = 0; r < 207; ++r) csv += (r ? "," : "") + std::string("s") + std::to_string(r);
  csv += '\n';
  for (int t = 0; t < 2016; ++t) {
    for (int r = 0; r < 207; ++r) csv += (r ? ",61" : "61");
    csv += '\n';
  }
  std::istringstream in(csv);
  const SpeedField f = parse_speed_csv(in);
  REQUIRE(f.n_roads() == 207);
  REQUIRE(f.n_steps() == 2016);
}

TEST_CASE("speed CSV: round trip is canonicalizing and idempotent") {
  const std::string raw = "a,b\n1.50,\n,2.25\n0.125,17\n";
  std::istringstream in(raw);
  const SpeedField f = parse_speed_csv(in);
  const std::string once = speed_csv_string(f);
  std::istringstream in2(once);
  const std::string twice = speed_csv_string(parse_speed_csv(in2));
  REQUIRE(once == twice);
  REQUIRE(is_missing(f.speeds[1][0]));
  REQUIRE(is_missing(f.speeds[0][1]));
}

TEST_CASE("speed CSV: ragged and non-numeric rows are rejected with location") {
  std::istringstream ragged("a,b\n1,2\n3\n");
  REQUIRE_THROWS_AS(parse_speed_csv(ragged), DataError);

  std::istringstream bad("a,b\n1,x7\n");
  try {
    parse_speed_csv(bad);
    FAIL("expected parse error");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("line 2") != std::string::npos);
    REQUIRE(msg.find("column 2") != std::string::npos);
  }
}

TEST_CASE("interpolation: interior gap is linear, edges extend flat") {
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds = {{10.0, kMissing, 20.0}};
  REQUIRE(interpolate_missing(f).speeds[0] == std::vector<double>{10.0, 15.0, 20.0});

  f.speeds = {{kMissing, 8.0, kMissing}};
  REQUIRE(interpolate_missing(f).speeds[0] == std::vector<double>{8.0, 8.0, 8.0});
}

TEST_CASE("interpolation: all-missing road is reported by id") {
  SpeedField f;
  f.road_ids = {"ok", "dead"};
  f.speeds = {{1.0, 2.0}, {kMissing, kMissing}};
  try {
    interpolate_missing(f);
    FAIL("expected error");
  } catch (const DataError& e) {
    REQUIRE(std::string(e.what()).find("dead") != std::string::npos);
  }
}

TEST_CASE("interpolation: masked smooth series stays within the Lipschitz bound") {
  // analytic series with known per-step bound on |x_{t+1} - x_t|
  const int n = 400;
  std::vector<double> truth(n);
  for (int t = 0; t < n; ++t) truth[t] = 50.0 + 10.0 * std::sin(kTwoPi * t / 100.0);
  const double lipschitz = 10.0 * kTwoPi / 100.0;  // max slope per step

  Rng rng(7);
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds = {truth};
  int masked = 0;
  for (int t = 0; t < n; ++t) {
    if (rng.uniform() < 0.3) {
      f.speeds[0][t] = kMissing;
      ++masked;
    }
  }
  REQUIRE(masked > 50);
  // keep endpoints so the flat-extension rule isn't in play for the bound
  f.speeds[0][0] = truth[0];
  f.speeds[0][n - 1] = truth[n - 1];

  const SpeedField filled = interpolate_missing(f);
  // linear interpolation over a gap of width w has error <= L*w/2; gaps from a
  // 30% mask are short, so test against the generous bound L * longest_gap
  int longest_gap = 0, run = 0;
  for (int t = 0; t < n; ++t) {
    run = is_missing(f.speeds[0][t]) ? run + 1 : 0;
    longest_gap = std::max(longest_gap, run);
  }
  double max_err = 0.0;
  for (int t = 0; t < n; ++t) max_err = std::max(max_err, std::abs(filled.speeds[0][t] - truth[t]));
  REQUIRE(max_err <= lipschitz * longest_gap);
}

TEST_CASE("interpolation is idempotent") {
  const SyntheticCorpus corpus = gen_synthetic(4, 128, 11, Profile::Volatile);
  SpeedField holey = corpus.field;
  Rng rng(3);
  for (auto& row : holey.speeds)
    for (auto& v : row)
      if (rng.uniform() < 0.2) v = kMissing;
  const SpeedField once = interpolate_missing(holey);
  const SpeedField twice = interpolate_missing(once);
  REQUIRE(once.speeds == twice.speeds);
}

TEST_CASE("make_windows: samples and counts match the definition") {
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds = {{1, 2, 3, 4}};
  const auto samples = make_windows(f, "r", WindowSpec{1, 2});
  REQUIRE(samples.size() == 2);
  REQUIRE(samples[0].features == std::vector<double>{1, 2});
  REQUIRE(samples[0].target == 3);
  REQUIRE(samples[0].t == 0);
  REQUIRE(samples[1].features == std::vector<double>{2, 3});
  REQUIRE(samples[1].target == 4);
}

TEST_CASE("make_windows: degenerate h=0 window") {
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds = {{5, 6, 7, 8, 9}};
  const auto samples = make_windows(f, "r", WindowSpec{0, 1});
  REQUIRE(samples.size() == 4);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    REQUIRE(samples[i].features == std::vector<double>{f.speeds[0][i]});
    REQUIRE(samples[i].target == f.speeds[0][i + 1]);
  }
}

TEST_CASE("make_windows: count formula, exhaustively for short series") {
  for (int n = 2; n <= 32; ++n) {
    SpeedField f;
    f.road_ids = {"r"};
    f.speeds = {std::vector<double>(n, 1.0)};
    for (int h = 0; h <= 4; ++h) {
      for (int d = h + 1; d <= 6; ++d) {
        if (n <= d) {
          REQUIRE_THROWS_AS(make_windows(f, 0, WindowSpec{h, d}), DataError);
        } else {
          REQUIRE(make_windows(f, 0, WindowSpec{h, d}).size() ==
                  static_cast<std::size_t>(n - d));
        }
      }
    }
  }
  // week of 5-minute readings
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds = {std::vector<double>(2016, 1.0)};
  REQUIRE(make_windows(f, 0, WindowSpec{11, 12}).size() == 2004);
}

TEST_CASE("label_congestion: percentile threshold with linear interpolation") {
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds.resize(1);
  for (int v = 1; v <= 100; ++v) f.speeds[0].push_back(v);

  const auto result = label_congestion(f, "r", CongestionConfig{10.0}, IndexRange{0, 100});
  // independent oracle: sort and interpolate between order statistics
  std::vector<double> sorted = f.speeds[0];
  std::sort(sorted.begin(), sorted.end());
  const double rank = 0.10 * 99.0;
  const double expect =
      sorted[static_cast<int>(rank)] +
      (rank - std::floor(rank)) * (sorted[static_cast<int>(rank) + 1] - sorted[static_cast<int>(rank)]);
  REQUIRE(result.threshold == Catch::Approx(expect));
  REQUIRE(result.threshold == Catch::Approx(10.9));
  for (int t = 0; t < 100; ++t)
    REQUIRE(static_cast<bool>(result.labels[t]) == (f.speeds[0][t] < 10.9));
}

TEST_CASE("label_congestion: constant series yields all zeros under strict <") {
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds = {std::vector<double>(40, 55.0)};
  const auto result = label_congestion(f, 0, CongestionConfig{10.0}, IndexRange{0, 40});
  REQUIRE(result.threshold == 55.0);
  for (auto l : result.labels) REQUIRE(l == 0);
}

TEST_CASE("label_congestion: p=0 all zeros, p=100 zero only at max ties") {
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds = {{3, 9, 9, 1, 5}};
  const auto p0 = label_congestion(f, 0, CongestionConfig{0.0}, IndexRange{0, 5});
  for (auto l : p0.labels) REQUIRE(l == 0);
  const auto p100 = label_congestion(f, 0, CongestionConfig{100.0}, IndexRange{0, 5});
  REQUIRE(p100.labels == std::vector<std::uint8_t>{1, 0, 0, 1, 1});
}

TEST_CASE("label_congestion: empty threshold source rejected") {
  SpeedField f;
  f.road_ids = {"r"};
  f.speeds = {{1, 2, 3}};
  REQUIRE_THROWS(label_congestion(f, 0, CongestionConfig{10.0}, IndexRange{2, 2}));
}

TEST_CASE("split_train_test: chronological counts") {
  auto samples = [](int n) {
    std::vector<WindowSample> s(n);
    for (int i = 0; i < n; ++i) s[i].t = i;
    return s;
  };
  const auto s10 = split_train_test(samples(10), 0.8);
  REQUIRE(s10.train.size() == 8);
  REQUIRE(s10.test.size() == 2);
  REQUIRE(s10.train.back().t < s10.test.front().t);

  const auto s3 = split_train_test(samples(3), 0.5);
  REQUIRE(s3.train.size() == 1);
  REQUIRE(s3.test.size() == 2);

  const auto s2004 = split_train_test(samples(2004), 0.8);
  REQUIRE(s2004.train.size() == 1603);
  REQUIRE(s2004.test.size() == 401);

  REQUIRE_THROWS_AS(split_train_test(samples(1), 0.5), DataError);
}

TEST_CASE("split_train_test preserves every sample exactly once") {
  SpeedField f;
  f.road_ids = {"r"};
  Rng rng(5);
  f.speeds.resize(1);
  for (int t = 0; t < 50; ++t) f.speeds[0].push_back(rng.uniform(10, 70));
  auto samples = make_windows(f, 0, WindowSpec{2, 4});
  const auto split = split_train_test(samples, 0.37);

  auto key = [](const WindowSample& s) { return std::make_pair(s.t, s.target); };
  std::map<std::pair<int, double>, int> counts;
  for (const auto& s : samples) counts[key(s)]++;
  for (const auto& s : split.train) counts[key(s)]--;
  for (const auto& s : split.test) counts[key(s)]--;
  for (const auto& [k, v] : counts) REQUIRE(v == 0);
}

TEST_CASE("gen_synthetic: determinism and validity") {
  const auto a = gen_synthetic(6, 128, 42, Profile::Smooth);
  const auto b = gen_synthetic(6, 128, 42, Profile::Smooth);
  REQUIRE(a.field.speeds == b.field.speeds);
  REQUIRE(graph_csv_string(a.graph) == graph_csv_string(b.graph));
  REQUIRE(strongly_connected(a.graph));
  validate_cleaned(a.field);
  for (const auto& e : a.graph.edges) REQUIRE(e.length > 0.0);
}

TEST_CASE("gen_synthetic: smooth beats volatile on SR(K=5) for every road") {
  const auto smooth = gen_synthetic(8, 512, 9, Profile::Smooth);
  const auto rough = gen_synthetic(8, 512, 9, Profile::Volatile);
  for (int r = 0; r < 8; ++r)
    REQUIRE(sr_factor(smooth.field.speeds[r], 5) > sr_factor(rough.field.speeds[r], 5));
}

TEST_CASE("gen_synthetic: volatile profile swings harder (Bias) than smooth") {
  const auto smooth = gen_synthetic(6, 512, 27, Profile::Smooth);
  const auto rough = gen_synthetic(6, 512, 27, Profile::Volatile);
  for (int r = 0; r < 6; ++r)
    REQUIRE(bias_factor(rough.field.speeds[r], 1) > bias_factor(smooth.field.speeds[r], 1));
}

TEST_CASE("gen_synthetic: rush-hour profile has strong daily autocorrelation") {
  const auto corpus = gen_synthetic(4, 2016, 13, Profile::RushHour);
  for (int r = 0; r < 4; ++r)
    REQUIRE(testsupport::autocorrelation(corpus.field.speeds[r], 288) > 0.5);
}

TEST_CASE("gen_synthetic: precondition violations") {
  REQUIRE_THROWS_AS(gen_synthetic(1, 128, 1, Profile::Smooth), std::invalid_argument);
  REQUIRE_THROWS_AS(gen_synthetic(4, 32, 1, Profile::Smooth), std::invalid_argument);
}

TEST_CASE("graph CSV: round trip and validation") {
  const auto corpus = gen_synthetic(6, 64, 3, Profile::Smooth);
  const std::string text = graph_csv_string(corpus.graph);
  std::istringstream in(text);
  const RoadGraph g = parse_graph_csv(in);
  REQUIRE(graph_csv_string(g) == text);

  std::istringstream not_connected("a,b,r0,1.0\n");
  REQUIRE_THROWS_AS(parse_graph_csv(not_connected), DataError);
  std::istringstream bad_len("a,b,r0,0\nb,a,r0,1\n");
  REQUIRE_THROWS_AS(parse_graph_csv(bad_len), DataError);
}

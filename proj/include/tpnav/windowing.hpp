#pragma once
// Sliding-window dataset construction, congestion labeling, chronological split.

#include <cstdint>
#include <string_view>
#include <vector>

#include "tpnav/speed_field.hpp"

namespace tpnav {

// Window of h+1 readings x_t..x_{t+h}; target sits at t+d, strictly beyond it.
struct WindowSpec {
  int h = 11;
  int d = 12;

  void validate() const {
    if (h < 0) throw std::invalid_argument("window size h must be >= 0");
    if (d <= h) throw std::invalid_argument("target offset d must exceed window size h");
  }
  // steps between the last window entry and the target
  int lead() const { return d - h; }
};

struct WindowSample {
  std::vector<double> features;  // x_t .. x_{t+h}, length h+1
  double target = 0.0;
  int road = 0;  // index into the originating SpeedField
  int t = 0;     // origin timestep
};

inline std::vector<WindowSample> make_windows(const SpeedField& field, int road,
                                              const WindowSpec& spec) {
  spec.validate();
  if (road < 0 || road >= field.n_roads()) throw std::invalid_argument("road index out of range");
  const auto& row = field.speeds[road];
  const int n = static_cast<int>(row.size());
  if (n <= spec.d)
    throw DataError("empty dataset: series of " + std::to_string(n) +
                    " steps cannot host targets at offset d=" + std::to_string(spec.d));
  for (double v : row)
    if (is_missing(v)) throw std::invalid_argument("make_windows requires a cleaned field");

  std::vector<WindowSample> samples;
  samples.reserve(static_cast<std::size_t>(n - spec.d));
  for (int t = 0; t + spec.d < n; ++t) {
    WindowSample s;
    s.features.assign(row.begin() + t, row.begin() + t + spec.h + 1);
    s.target = row[t + spec.d];
    s.road = road;
    s.t = t;
    samples.push_back(std::move(s));
  }
  return samples;
}

inline std::vector<WindowSample> make_windows(const SpeedField& field, std::string_view road_id,
                                              const WindowSpec& spec) {
  return make_windows(field, field.require_road(road_id), spec);
}

struct CongestionConfig {
  double p = 10.0;  // percentile threshold

  void validate() const {
    if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("congestion percentile outside [0,100]");
  }
};

struct CongestionLabels {
  std::vector<std::uint8_t> labels;  // 1 = congested (speed strictly below threshold)
  double threshold = 0.0;
};

// Threshold comes from threshold_source only (the training split), then
// applies to every timestep.
inline CongestionLabels label_congestion(const SpeedField& field, int road,
                                         const CongestionConfig& cfg, IndexRange threshold_source) {
  cfg.validate();
  if (road < 0 || road >= field.n_roads()) throw std::invalid_argument("road index out of range");
  const auto& row = field.speeds[road];
  if (threshold_source.empty() || threshold_source.begin < 0 ||
      threshold_source.end > static_cast<int>(row.size()))
    throw std::invalid_argument("threshold_source must be a nonempty subrange of timesteps");

  std::vector<double> history(row.begin() + threshold_source.begin,
                              row.begin() + threshold_source.end);
  CongestionLabels out;
  out.threshold = percentile_linear(std::move(history), cfg.p);
  out.labels.resize(row.size());
  for (std::size_t t = 0; t < row.size(); ++t)
    out.labels[t] = row[t] < out.threshold ? 1 : 0;
  return out;
}

inline CongestionLabels label_congestion(const SpeedField& field, std::string_view road_id,
                                         const CongestionConfig& cfg, IndexRange threshold_source) {
  return label_congestion(field, field.require_road(road_id), cfg, threshold_source);
}

struct TrainTestSplit {
  std::vector<WindowSample> train;
  std::vector<WindowSample> test;
};

// Chronological: first floor(ratio*N) samples by origin t go to train.
inline TrainTestSplit split_train_test(std::vector<WindowSample> samples, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split ratio must lie in (0,1)");
  const auto n = samples.size();
  const auto n_train = static_cast<std::size_t>(ratio * static_cast<double>(n));
  if (n_train == 0 || n_train == n)
    throw DataError("train/test split leaves one side empty (" + std::to_string(n) + " samples)");
  TrainTestSplit out;
  out.train.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(samples.begin() + static_cast<std::ptrdiff_t>(n_train), samples.end());
  return out;
}

}  // namespace tpnav

#pragma once
// Reference predictors: history average, KNN (uniform / inverse-distance),
// and the two-hidden-layer MLP regressor (shared network code in mlp.hpp).

#include <span>

#include "tpnav/mlp.hpp"
#include "tpnav/windowing.hpp"

namespace tpnav {

inline double history_average(std::span<const double> features) {
  if (features.empty()) throw std::invalid_argument("history_average of empty state vector");
  double sum = 0.0;
  for (double v : features) sum += v;
  return sum / static_cast<double>(features.size());
}

struct KnnParams {
  enum class Weighting { Uniform, InverseDistance };
  int k = 5;
  Weighting weighting = Weighting::Uniform;
};

inline constexpr double kKnnEpsilon = 1e-9;

inline double knn_predict(const std::vector<WindowSample>& train, const KnnParams& params,
                          std::span<const double> features) {
  if (train.empty()) throw DataError("knn_predict with empty training set");
  if (params.k < 1 || params.k > static_cast<int>(train.size()))
    throw std::invalid_argument("knn k must lie in [1, training-set size]");

  std::vector<std::pair<double, std::size_t>> dist(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& f = train[i].features;
    if (f.size() != features.size()) throw std::invalid_argument("knn feature length mismatch");
    double d2 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double d = f[j] - features[j];
      d2 += d * d;
    }
    dist[i] = {std::sqrt(d2), i};  // index tiebreak keeps neighbor choice deterministic
  }
  std::partial_sort(dist.begin(), dist.begin() + params.k, dist.end());

  if (params.weighting == KnnParams::Weighting::Uniform) {
    double sum = 0.0;
    for (int i = 0; i < params.k; ++i) sum += train[dist[i].second].target;
    return sum / params.k;
  }
  double wsum = 0.0, vsum = 0.0;
  for (int i = 0; i < params.k; ++i) {
    const double w = 1.0 / (dist[i].first + kKnnEpsilon);
    wsum += w;
    vsum += w * train[dist[i].second].target;
  }
  return vsum / wsum;
}

inline MlpModel train_mlp_regressor(const std::vector<WindowSample>& train,
                                    const MlpParams& params) {
  if (train.empty()) throw DataError("cannot train MLP on an empty sample set");
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  x.reserve(train.size());
  y.reserve(train.size());
  for (const auto& s : train) {
    x.push_back(s.features);
    y.push_back(s.target);
  }
  return train_mlp(x, y, params);
}

}  // namespace tpnav

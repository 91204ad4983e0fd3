#pragma once
// Gaussian speed-distribution sigma (population MLE) and path-level
// congestion probability.

#include <span>

#include "tpnav/common.hpp"

namespace tpnav {

struct SpeedDistribution {
  double mean = 0.0;
  double sigma = 0.0;
};

// Population standard deviation over the window (1/h normalizer).
inline double sigma_mle(std::span<const double> window) {
  if (window.empty()) throw std::invalid_argument("sigma_mle of empty window");
  const double n = static_cast<double>(window.size());
  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : window) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / n);
}

enum class PathCongestionMode {
  AllCongested,  // product of per-edge probabilities (the literal formula)
  AnyCongested,  // 1 - product of complements, exposed as an alternative
};

inline double path_congestion_prob(std::span<const double> edge_probs,
                                   PathCongestionMode mode = PathCongestionMode::AllCongested) {
  double prod = 1.0;
  for (double p : edge_probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability outside [0,1]");
    prod *= mode == PathCongestionMode::AllCongested ? p : 1.0 - p;
  }
  return mode == PathCongestionMode::AllCongested ? prod : 1.0 - prod;
}

}  // namespace tpnav

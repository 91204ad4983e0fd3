#pragma once
// Road-by-timestep speed matrix and the cleaning pass that removes gaps.

#include <algorithm>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "tpnav/common.hpp"

namespace tpnav {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

struct SpeedField {
  std::vector<std::string> road_ids;          // length n_roads
  std::vector<std::vector<double>> speeds;    // [road][step], mph
  int step_minutes = 5;

  int n_roads() const { return static_cast<int>(road_ids.size()); }
  int n_steps() const { return speeds.empty() ? 0 : static_cast<int>(speeds.front().size()); }

  int road_index(std::string_view id) const {
    for (int i = 0; i < n_roads(); ++i)
      if (road_ids[i] == id) return i;
    return -1;
  }

  int require_road(std::string_view id) const {
    const int i = road_index(id);
    if (i < 0) throw DataError("unknown road id: " + std::string(id));
    return i;
  }
};

// Post-cleaning invariant: rectangular, every entry finite and > 0.
inline void validate_cleaned(const SpeedField& field) {
  if (field.n_roads() < 1 || field.n_steps() < 2)
    throw DataError("speed field needs at least 1 road and 2 timesteps");
  for (int r = 0; r < field.n_roads(); ++r) {
    if (static_cast<int>(field.speeds[r].size()) != field.n_steps())
      throw DataError("speed field is not rectangular at road " + field.road_ids[r]);
    for (double v : field.speeds[r])
      if (!(std::isfinite(v) && v > 0.0))
        throw DataError("road " + field.road_ids[r] + " has a non-positive or non-finite speed after cleaning");
  }
}

// Fill gaps per road: interior gaps linearly between nearest valid neighbors,
// leading/trailing gaps with the nearest valid value. Nonpositive readings
// count as missing (dead loop detectors report 0).
inline SpeedField interpolate_missing(const SpeedField& field) {
  SpeedField out = field;
  for (int r = 0; r < out.n_roads(); ++r) {
    auto& row = out.speeds[r];
    const int n = static_cast<int>(row.size());
    auto usable = [&](int t) { return !is_missing(row[t]) && row[t] > 0.0; };

    int first = -1;
    for (int t = 0; t < n; ++t)
      if (usable(t)) { first = t; break; }
    if (first < 0)
      throw DataError("road " + out.road_ids[r] + " has no usable readings");

    int last = n - 1;
    while (!usable(last)) --last;

    for (int t = 0; t < first; ++t) row[t] = row[first];
    for (int t = last + 1; t < n; ++t) row[t] = row[last];

    int prev = first;
    for (int t = first + 1; t <= last; ++t) {
      if (!usable(t)) continue;
      if (t > prev + 1) {
        const double lo = row[prev], hi = row[t];
        for (int j = prev + 1; j < t; ++j)
          row[j] = lo + (hi - lo) * static_cast<double>(j - prev) / static_cast<double>(t - prev);
      }
      prev = t;
    }
  }
  return out;
}

// Percentile with linear interpolation between order statistics, p in [0,100].
inline double percentile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile p outside [0,100]");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace tpnav

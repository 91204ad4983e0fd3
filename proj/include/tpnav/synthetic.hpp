#pragma once
// Seeded synthetic corpora: speed matrices with distinct temporal character
// plus a strongly connected road graph to route on.

#include <string>

#include "tpnav/graph.hpp"
#include "tpnav/speed_field.hpp"

namespace tpnav {

enum class Profile { Smooth, RushHour, Volatile };

inline Profile profile_from_string(std::string_view s) {
  if (s == "smooth") return Profile::Smooth;
  if (s == "rush-hour") return Profile::RushHour;
  if (s == "volatile") return Profile::Volatile;
  throw std::invalid_argument("unknown profile '" + std::string(s) +
                              "' (expected smooth | rush-hour | volatile)");
}

inline std::string to_string(Profile p) {
  switch (p) {
    case Profile::Smooth: return "smooth";
    case Profile::RushHour: return "rush-hour";
    default: return "volatile";
  }
}

struct SyntheticCorpus {
  SpeedField field;
  RoadGraph graph;
};

namespace detail {

inline std::vector<double> gen_series(Profile profile, int n_steps, int step_minutes, Rng& rng) {
  std::vector<double> x(n_steps);
  const double steps_per_day = 1440.0 / step_minutes;
  switch (profile) {
    case Profile::Smooth: {
      const double base = rng.uniform(55.0, 68.0);
      const double amp = rng.uniform(2.0, 4.5);
      const double phase = rng.uniform(0.0, 1.0);
      for (int t = 0; t < n_steps; ++t) {
        const double slow = amp * std::sin(kTwoPi * (static_cast<double>(t) / n_steps + phase));
        x[t] = base + slow + rng.normal(0.0, 0.25);
      }
      break;
    }
    case Profile::RushHour: {
      const double base = rng.uniform(60.0, 68.0);
      const double morning = rng.uniform(7.5, 8.5);    // dip centers, hours of day
      const double evening = rng.uniform(17.0, 18.0);
      const double depth_m = rng.uniform(24.0, 34.0);
      const double depth_e = rng.uniform(22.0, 32.0);
      const double width = rng.uniform(0.7, 1.1);      // hours
      for (int t = 0; t < n_steps; ++t) {
        const double hour = std::fmod(static_cast<double>(t), steps_per_day) * step_minutes / 60.0;
        auto dip = [&](double center, double depth) {
          const double dh = hour - center;
          return depth * std::exp(-dh * dh / (2.0 * width * width));
        };
        x[t] = base - dip(morning, depth_m) - dip(evening, depth_e) + rng.normal(0.0, 1.0);
        x[t] = std::max(x[t], 3.0);
      }
      break;
    }
    case Profile::Volatile: {
      const double base = rng.uniform(36.0, 52.0);
      const double period1 = rng.uniform(3.0, 6.0);    // steps; deliberately high frequency
      const double period2 = rng.uniform(7.0, 11.0);
      const double amp1 = rng.uniform(7.0, 11.0);
      const double amp2 = rng.uniform(5.0, 9.0);
      const double ph1 = rng.uniform(0.0, 1.0), ph2 = rng.uniform(0.0, 1.0);
      bool jammed = false;
      double jam_drop = 0.0;
      for (int t = 0; t < n_steps; ++t) {
        if (!jammed && rng.uniform() < 0.03) {
          jammed = true;
          jam_drop = rng.uniform(18.0, 30.0);
        } else if (jammed && rng.uniform() < 0.18) {
          jammed = false;
        }
        const double fast = amp1 * std::sin(kTwoPi * (t / period1 + ph1)) +
                            amp2 * std::sin(kTwoPi * (t / period2 + ph2));
        x[t] = base + fast - (jammed ? jam_drop : 0.0) + rng.normal(0.0, 4.0);
        x[t] = std::min(std::max(x[t], 3.0), 90.0);
      }
      break;
    }
  }
  return x;
}

inline std::string padded_id(char prefix, int i, int width) {
  std::string digits = std::to_string(i);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return prefix + digits;
}

// Ring over the first V roads (paired directed edges per road), remaining
// roads become random chords. Ring => strongly connected.
inline RoadGraph gen_graph(int n_roads, Rng& rng, const std::vector<std::string>& road_ids) {
  const int n_vertices = std::max(2, std::min(n_roads, 2 * n_roads / 3));
  int width = 1;
  for (int v = n_vertices - 1; v >= 10; v /= 10) ++width;
  std::vector<std::string> vid(n_vertices);
  for (int i = 0; i < n_vertices; ++i) vid[i] = padded_id('v', i, width);

  std::vector<GraphEdgeSpec> specs;
  auto add_road = [&](int a, int b, const std::string& road) {
    const double length = rng.uniform(0.4, 2.5);
    specs.push_back({vid[a], vid[b], road, length});
    specs.push_back({vid[b], vid[a], road, length});
  };

  for (int i = 0; i < std::min(n_vertices, n_roads); ++i)
    add_road(i, (i + 1) % n_vertices, road_ids[i]);

  std::vector<std::pair<int, int>> used;
  for (int i = n_vertices; i < n_roads; ++i) {
    int a = 0, b = 0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      a = rng.uniform_int(0, n_vertices - 1);
      b = rng.uniform_int(0, n_vertices - 1);
      if (a == b) continue;
      if (b == (a + 1) % n_vertices || a == (b + 1) % n_vertices) continue;  // ring already links them
      const auto key = std::minmax(a, b);
      if (std::find(used.begin(), used.end(), std::pair<int, int>(key.first, key.second)) != used.end())
        continue;
      used.emplace_back(key.first, key.second);
      break;
    }
    if (a == b) b = (a + 1) % n_vertices;  // tiny graphs may exhaust attempts
    add_road(a, b, road_ids[i]);
  }
  return make_road_graph(specs);
}

}  // namespace detail

inline SyntheticCorpus gen_synthetic(int n_roads, int n_steps, std::uint64_t seed, Profile profile,
                                     int step_minutes = 5) {
  if (n_roads < 2) throw std::invalid_argument("gen_synthetic needs n_roads >= 2");
  if (n_steps < 64) throw std::invalid_argument("gen_synthetic needs n_steps >= 64");

  Rng rng(seed);
  SyntheticCorpus corpus;
  corpus.field.step_minutes = step_minutes;
  int width = 1;
  for (int v = n_roads - 1; v >= 10; v /= 10) ++width;
  for (int r = 0; r < n_roads; ++r)
    corpus.field.road_ids.push_back(detail::padded_id('r', r, width));
  corpus.field.speeds.resize(n_roads);
  for (int r = 0; r < n_roads; ++r)
    corpus.field.speeds[r] = detail::gen_series(profile, n_steps, step_minutes, rng);

  corpus.graph = detail::gen_graph(n_roads, rng, corpus.field.road_ids);
  validate_graph(corpus.graph);
  validate_cleaned(corpus.field);
  return corpus;
}

}  // namespace tpnav

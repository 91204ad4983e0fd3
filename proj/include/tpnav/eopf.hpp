#pragma once
// Learned route corrector: an MLP maps per-edge (predicted speed, congestion
// probability, sigma, candidate edge count) to a corrected speed; candidates
// are re-ranked by travel time under corrected speeds.

#include <optional>

#include "tpnav/mlp.hpp"
#include "tpnav/router.hpp"

namespace tpnav {

struct EopfRecord {
  double s_hat = 0.0;      // predicted speed
  double p_hat = 0.0;      // congestion probability in [0,1]
  double sigma_hat = 0.0;  // window sigma
  int n = 0;               // edge count of the containing candidate path
  double target = 0.0;     // realized speed (training only)
};

// One observed edge inside one served candidate path. Absent fields mark
// entries that could not be assembled and are skipped with a count.
struct EopfEdgeObs {
  std::optional<double> s_hat;
  std::optional<double> p_hat;
  std::optional<double> sigma_hat;
  std::optional<double> actual;
};

// history[entry][candidate][edge]
using EopfHistory = std::vector<std::vector<std::vector<EopfEdgeObs>>>;

struct EopfBuildResult {
  std::vector<EopfRecord> records;
  int skipped = 0;
};

// One record per (edge, candidate path) occurrence; duplicates are distinct
// occurrences and stay.
inline EopfBuildResult build_training_set(const EopfHistory& history) {
  if (history.empty()) throw DataError("eopf history is empty");
  EopfBuildResult out;
  for (const auto& entry : history) {
    for (const auto& candidate : entry) {
      const int n = static_cast<int>(candidate.size());
      for (const auto& obs : candidate) {
        if (!obs.s_hat || !obs.p_hat || !obs.sigma_hat || !obs.actual) {
          ++out.skipped;
          continue;
        }
        out.records.push_back(EopfRecord{*obs.s_hat, *obs.p_hat, *obs.sigma_hat, n, *obs.actual});
      }
    }
  }
  return out;
}

inline MlpModel train_eopf(const std::vector<EopfRecord>& records, const MlpParams& params) {
  if (records.size() < 10)
    throw DataError("eopf training needs at least 10 records, got " +
                    std::to_string(records.size()));
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  x.reserve(records.size());
  y.reserve(records.size());
  for (const auto& r : records) {
    if (!(r.target > 0.0)) throw DataError("eopf training target must be a positive speed");
    x.push_back({r.s_hat, r.p_hat, r.sigma_hat, static_cast<double>(r.n)});
    y.push_back(r.target);
  }
  return train_mlp(x, y, params);
}

struct EdgeFeatures {
  double s_hat = 0.0;
  double p_hat = 0.0;
  double sigma_hat = 0.0;
};

struct RerankChoice {
  PathResult path;
  int rank = 0;            // index into the candidate list
  double corrected_cost = 0.0;
};

inline double corrected_speed(const MlpModel& model, const EdgeFeatures& f, int path_edges) {
  return model.predict(
      std::array<double, 4>{f.s_hat, f.p_hat, f.sigma_hat, static_cast<double>(path_edges)});
}

// Recompute each candidate's cost with corrected speeds and return the cheapest;
// exact ties keep the lower original rank.
inline RerankChoice rerank(const RoadGraph& g, const std::vector<PathResult>& candidates,
                           const std::vector<std::optional<EdgeFeatures>>& per_edge,
                           const MlpModel& model) {
  if (candidates.empty()) throw std::invalid_argument("rerank needs at least one candidate");
  RerankChoice best;
  best.rank = -1;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto& path = candidates[c];
    const int n = static_cast<int>(path.edges.size());
    double cost = 0.0;
    for (int ei : path.edges) {
      if (ei < 0 || ei >= static_cast<int>(per_edge.size()) || !per_edge[ei])
        throw DataError("rerank: missing features for edge " + std::to_string(ei) + " (road " +
                        g.road_ids[g.edges[ei].road] + ")");
      const double speed = corrected_speed(model, *per_edge[ei], n);
      cost += g.edges[ei].length / speed;
    }
    if (best.rank < 0 || cost < best.corrected_cost) {
      best.path = path;
      best.rank = static_cast<int>(c);
      best.corrected_cost = cost;
    }
  }
  return best;
}

}  // namespace tpnav

#pragma once
// Experiment harness: request generation, navigation evaluation (optimal vs
// naive vs predicted vs EOPF, all priced on actual speeds), horizon sweep,
// epoch curve, and the prediction-model comparison tables.

#include <map>
#include <memory>
#include <optional>

#include "tpnav/baselines.hpp"
#include "tpnav/eopf.hpp"
#include "tpnav/gbtree.hpp"
#include "tpnav/metrics.hpp"
#include "tpnav/router.hpp"
#include "tpnav/signal.hpp"
#include "tpnav/synthetic.hpp"
#include "tpnav/uncertainty.hpp"

namespace tpnav {

// ---- per-road model families ----------------------------------------------

// A per-road time-series model: given history up to t_now, produce a value
// for that road (a speed forecast, or a congestion probability).
class FieldModel {
 public:
  virtual ~FieldModel() = default;
  virtual double value(const SpeedField& field, int road, int t_now) const = 0;
};

// Perfect-information predictor: returns the actual speed at t_now + lead.
class OracleSpeedModel : public FieldModel {
 public:
  explicit OracleSpeedModel(int lead) : lead_(lead) {}
  double value(const SpeedField& field, int road, int t_now) const override {
    return field.speeds[road][t_now + lead_];
  }

 private:
  int lead_;
};

struct PerRoadGbt {
  WindowSpec window;
  std::vector<std::optional<BoostedEnsemble>> by_road;  // index = field road index
};

inline std::vector<double> state_vector(const SpeedField& field, int road, int t_now, int h) {
  if (t_now - h < 0 || t_now >= field.n_steps())
    throw std::invalid_argument("state vector window out of range");
  const auto& row = field.speeds[road];
  return std::vector<double>(row.begin() + (t_now - h), row.begin() + t_now + 1);
}

class GbtFieldModel : public FieldModel {
 public:
  GbtFieldModel(const PerRoadGbt& models, bool probabilities, double fallback = 0.0)
      : models_(models), probabilities_(probabilities), fallback_(fallback) {}

  double value(const SpeedField& field, int road, int t_now) const override {
    const auto& model = models_.by_road.at(road);
    if (!model) return fallback_;
    const auto features = state_vector(field, road, t_now, models_.window.h);
    return probabilities_ ? model->predict_proba(features) : model->predict(features);
  }

 private:
  const PerRoadGbt& models_;
  bool probabilities_;
  double fallback_;
};

// ---- per-road training -----------------------------------------------------

struct PerRoadTrainStats {
  int roads_trained = 0;
  std::vector<std::string> skipped_roads;  // single-class congestion roads
};

inline PerRoadGbt train_per_road_regressors(const SpeedField& field, const WindowSpec& spec,
                                            double train_ratio, const BoostParams& params) {
  PerRoadGbt out;
  out.window = spec;
  out.by_road.resize(field.n_roads());
  for (int r = 0; r < field.n_roads(); ++r) {
    auto split = split_train_test(make_windows(field, r, spec), train_ratio);
    out.by_road[r] = train_regressor(split.train, params);
  }
  return out;
}

inline PerRoadGbt train_per_road_classifiers(const SpeedField& field, const WindowSpec& spec,
                                             double train_ratio, const BoostParams& params,
                                             const CongestionConfig& cfg,
                                             PerRoadTrainStats* stats = nullptr) {
  PerRoadGbt out;
  out.window = spec;
  out.by_road.resize(field.n_roads());
  for (int r = 0; r < field.n_roads(); ++r) {
    auto samples = make_windows(field, r, spec);
    const auto n_train = static_cast<std::size_t>(train_ratio * samples.size());
    const auto labels =
        label_congestion(field, r, cfg, IndexRange{0, static_cast<int>(n_train) + spec.d});
    for (auto& s : samples) s.target = labels.labels[s.t + spec.d];
    auto split = split_train_test(std::move(samples), train_ratio);
    try {
      out.by_road[r] = train_classifier(split.train, params);
      if (stats) ++stats->roads_trained;
    } catch (const DataError&) {
      if (stats) stats->skipped_roads.push_back(field.road_ids[r]);
    }
  }
  return out;
}

// Threshold history for labels = the raw steps feeding training samples:
// train samples have origin t < n_train, targets reach t + d.

// ---- model set serialization ----------------------------------------------

inline void save_model_set(const PerRoadGbt& set, const std::vector<std::string>& road_ids,
                           std::ostream& out) {
  out << "tpnav-gbt-set 1\n";
  out << "window_h " << set.window.h << "\nwindow_d " << set.window.d << "\n";
  out << "n_roads " << set.by_road.size() << "\n";
  for (std::size_t r = 0; r < set.by_road.size(); ++r) {
    out << "road " << road_ids[r] << " " << (set.by_road[r] ? "present" : "absent") << "\n";
    if (set.by_road[r]) save_ensemble(*set.by_road[r], out);
  }
  out << "end-set\n";
}

inline PerRoadGbt load_model_set(std::istream& in, const SpeedField& field) {
  auto tok = [&](const char* what) {
    std::string t;
    if (!(in >> t)) throw DataError(std::string("model set truncated at ") + what);
    return t;
  };
  if (tok("magic") != "tpnav-gbt-set" || tok("version") != "1")
    throw DataError("not a tpnav model-set file");
  PerRoadGbt set;
  if (tok("window_h") != "window_h") throw DataError("model set: expected window_h");
  set.window.h = std::stoi(tok("h"));
  if (tok("window_d") != "window_d") throw DataError("model set: expected window_d");
  set.window.d = std::stoi(tok("d"));
  if (tok("n_roads") != "n_roads") throw DataError("model set: expected n_roads");
  const int n = std::stoi(tok("count"));
  if (n != field.n_roads())
    throw DataError("model set covers " + std::to_string(n) + " roads but the field has " +
                    std::to_string(field.n_roads()));
  set.by_road.resize(n);
  for (int i = 0; i < n; ++i) {
    if (tok("road") != "road") throw DataError("model set: expected road entry");
    const std::string id = tok("road id");
    const int r = field.require_road(id);
    const std::string presence = tok("presence");
    if (presence == "present")
      set.by_road[r] = load_ensemble(in);
    else if (presence != "absent")
      throw DataError("model set: bad presence flag " + presence);
  }
  if (tok("end") != "end-set") throw DataError("model set: missing end marker");
  return set;
}

// ---- navigation evaluation --------------------------------------------------

struct NavRequest {
  int id = 0;
  int origin = 0;
  int destination = 0;
  int timestep = 0;  // "now": the last observed interval
};

inline std::vector<NavRequest> gen_requests(const RoadGraph& g, int n_per_interval,
                                            IndexRange intervals, std::uint64_t seed) {
  if (g.n_vertices() < 2) throw std::invalid_argument("request generation needs >= 2 vertices");
  if (n_per_interval < 1) throw std::invalid_argument("n_per_interval must be >= 1");
  Rng rng(seed);
  std::vector<NavRequest> out;
  out.reserve(static_cast<std::size_t>(std::max(0, intervals.size())) * n_per_interval);
  int id = 0;
  for (int t = intervals.begin; t < intervals.end; ++t) {
    for (int i = 0; i < n_per_interval; ++i) {
      const int o = rng.uniform_int(0, g.n_vertices() - 1);
      int d = rng.uniform_int(0, g.n_vertices() - 2);
      if (d >= o) ++d;
      out.push_back(NavRequest{id++, o, d, t});
    }
  }
  return out;
}

struct RegretRecord {
  NavRequest request;
  double t_optimal = 0.0;
  double t_naive = 0.0;
  double t_predict = 0.0;
  double t_eopf = 0.0;
  double regret_naive = 0.0;
  double regret_predict = 0.0;
  double regret_eopf = 0.0;
  bool eopf_used = false;
  bool predict_exact = false;  // predicted path == optimal path
  bool eopf_exact = false;
};

// Percentage distribution over |value| buckets.
struct NavBuckets {
  double gt30 = 0.0;
  double b20_30 = 0.0;
  double b10_20 = 0.0;
  double b5_10 = 0.0;
  double lt5 = 0.0;
};

struct NavSummary {
  int evaluated = 0;
  int skipped = 0;
  double mean_regret_naive = 0.0;
  double mean_regret_predict = 0.0;
  double mean_regret_eopf = 0.0;
  double exact_match_predict = 0.0;
  double exact_match_eopf = 0.0;
  int improved = 0;   // EOPF strictly faster than the predicted-only choice
  int worsened = 0;
  int unchanged = 0;
  double mean_improvement_improved = 0.0;
  NavBuckets better_dist;         // among improved requests
  NavBuckets worse_dist;          // among worsened requests
  NavBuckets predict_regret_dist; // regret vs optimal, all evaluated requests
  NavBuckets eopf_regret_dist;
};

struct NavEvalResult {
  std::vector<RegretRecord> records;
  NavSummary summary;
};

struct NavEvalConfig {
  WindowSpec window;
  int k_paths = 5;
};

namespace detail {

inline void bucket_add(NavBuckets& b, double fraction) {
  if (fraction >= 0.30)
    b.gt30 += 1.0;
  else if (fraction >= 0.20)
    b.b20_30 += 1.0;
  else if (fraction >= 0.10)
    b.b10_20 += 1.0;
  else if (fraction >= 0.05)
    b.b5_10 += 1.0;
  else
    b.lt5 += 1.0;
}

inline void bucket_finalize(NavBuckets& b, double denom) {
  if (denom <= 0.0) return;
  b.gt30 *= 100.0 / denom;
  b.b20_30 *= 100.0 / denom;
  b.b10_20 *= 100.0 / denom;
  b.b5_10 *= 100.0 / denom;
  b.lt5 *= 100.0 / denom;
}

// Per-interval snapshots shared by every request at the same timestep.
struct SnapshotCache {
  const RoadGraph& graph;
  const SpeedField& field;
  const FieldModel& speed_model;
  const FieldModel* congestion_model;
  WindowSpec window;

  std::vector<int> road_map;  // graph road index -> field road index
  int cached_t = -1;
  std::vector<double> actual, naive, predicted, sigma, phat;

  SnapshotCache(const RoadGraph& g, const SpeedField& f, const FieldModel& sm,
                const FieldModel* cm, WindowSpec w)
      : graph(g), field(f), speed_model(sm), congestion_model(cm), window(w) {
    road_map.resize(g.n_roads());
    for (int i = 0; i < g.n_roads(); ++i) road_map[i] = f.require_road(g.road_ids[i]);
    const int n = g.n_roads();
    actual.resize(n);
    naive.resize(n);
    predicted.resize(n);
    sigma.resize(n);
    phat.resize(n);
  }

  bool in_range(int t_now) const {
    return t_now >= window.h && t_now + window.lead() < field.n_steps();
  }

  void prepare(int t_now) {
    if (t_now == cached_t) return;
    const int lead = window.lead();
    for (int gi = 0; gi < graph.n_roads(); ++gi) {
      const int r = road_map[gi];
      actual[gi] = field.speeds[r][t_now + lead];
      naive[gi] = field.speeds[r][t_now];
      predicted[gi] = std::max(speed_model.value(field, r, t_now), 0.1);  // routing needs > 0
      if (window.h > 0) {
        const auto& row = field.speeds[r];
        sigma[gi] = sigma_mle(
            std::span<const double>(row.data() + (t_now - window.h + 1), window.h));
      } else {
        sigma[gi] = 0.0;
      }
      phat[gi] = congestion_model
                     ? std::min(std::max(congestion_model->value(field, r, t_now), 0.0), 1.0)
                     : 0.0;
    }
    cached_t = t_now;
  }
};

}  // namespace detail

inline NavEvalResult eval_navigation(const RoadGraph& graph, const SpeedField& field,
                                     const FieldModel& speed_model,
                                     const FieldModel* congestion_model, const MlpModel* eopf,
                                     std::vector<NavRequest> requests,
                                     const NavEvalConfig& config) {
  config.window.validate();
  if (config.k_paths < 1) throw std::invalid_argument("k_paths must be >= 1");

  std::sort(requests.begin(), requests.end(), [](const NavRequest& a, const NavRequest& b) {
    return a.timestep != b.timestep ? a.timestep < b.timestep : a.id < b.id;
  });

  detail::SnapshotCache cache(graph, field, speed_model, congestion_model, config.window);
  NavEvalResult result;
  double sum_naive = 0.0, sum_predict = 0.0, sum_eopf = 0.0, sum_improvement = 0.0;
  long exact_predict = 0, exact_eopf = 0;

  std::vector<std::optional<EdgeFeatures>> edge_features(
      eopf ? static_cast<std::size_t>(graph.n_edges()) : 0u);

  for (const NavRequest& req : requests) {
    if (!cache.in_range(req.timestep)) {
      ++result.summary.skipped;
      continue;
    }
    cache.prepare(req.timestep);

    const PathResult optimal = dijkstra(graph, req.origin, req.destination, cache.actual);
    const PathResult naive_path = dijkstra(graph, req.origin, req.destination, cache.naive);

    RegretRecord rec;
    rec.request = req;
    rec.t_optimal = optimal.cost;
    rec.t_naive = path_cost(graph, naive_path.edges, cache.actual);

    PathResult predict_path;
    if (eopf) {
      const auto candidates =
          yen_top_k(graph, req.origin, req.destination, config.k_paths, cache.predicted);
      predict_path = candidates.front();
      for (int ei = 0; ei < graph.n_edges(); ++ei) {
        const int road = graph.edges[ei].road;
        edge_features[ei] = EdgeFeatures{cache.predicted[road], cache.phat[road],
                                         cache.sigma[road]};
      }
      const RerankChoice choice = rerank(graph, candidates, edge_features, *eopf);
      if (choice.rank < 0 || choice.rank >= static_cast<int>(candidates.size()) ||
          candidates[static_cast<std::size_t>(choice.rank)].edges != choice.path.edges)
        throw std::logic_error("eopf choice escaped its candidate set");
      rec.t_eopf = path_cost(graph, choice.path.edges, cache.actual);
      rec.eopf_used = true;
      rec.eopf_exact = choice.path.edges == optimal.edges;
    } else {
      predict_path = dijkstra(graph, req.origin, req.destination, cache.predicted);
    }
    rec.t_predict = path_cost(graph, predict_path.edges, cache.actual);
    if (!eopf) rec.t_eopf = rec.t_predict;
    rec.predict_exact = predict_path.edges == optimal.edges;

    rec.regret_naive = (rec.t_naive - rec.t_optimal) / rec.t_optimal;
    rec.regret_predict = (rec.t_predict - rec.t_optimal) / rec.t_optimal;
    rec.regret_eopf = (rec.t_eopf - rec.t_optimal) / rec.t_optimal;

    sum_naive += rec.regret_naive;
    sum_predict += rec.regret_predict;
    sum_eopf += rec.regret_eopf;
    exact_predict += rec.predict_exact;
    exact_eopf += rec.eopf_exact;
    detail::bucket_add(result.summary.predict_regret_dist, rec.regret_predict);
    detail::bucket_add(result.summary.eopf_regret_dist, rec.regret_eopf);
    if (rec.eopf_used) {
      if (rec.t_eopf < rec.t_predict) {
        ++result.summary.improved;
        const double gain = (rec.t_predict - rec.t_eopf) / rec.t_predict;
        sum_improvement += gain;
        detail::bucket_add(result.summary.better_dist, gain);
      } else if (rec.t_eopf > rec.t_predict) {
        ++result.summary.worsened;
        detail::bucket_add(result.summary.worse_dist,
                           (rec.t_eopf - rec.t_predict) / rec.t_predict);
      } else {
        ++result.summary.unchanged;
      }
    }
    result.records.push_back(rec);
  }

  auto& s = result.summary;
  s.evaluated = static_cast<int>(result.records.size());
  if (s.evaluated > 0) {
    s.mean_regret_naive = sum_naive / s.evaluated;
    s.mean_regret_predict = sum_predict / s.evaluated;
    s.mean_regret_eopf = sum_eopf / s.evaluated;
    s.exact_match_predict = static_cast<double>(exact_predict) / s.evaluated;
    s.exact_match_eopf = static_cast<double>(exact_eopf) / s.evaluated;
  }
  if (s.improved > 0) s.mean_improvement_improved = sum_improvement / s.improved;
  detail::bucket_finalize(s.better_dist, s.improved);
  detail::bucket_finalize(s.worse_dist, s.worsened);
  detail::bucket_finalize(s.predict_regret_dist, s.evaluated);
  detail::bucket_finalize(s.eopf_regret_dist, s.evaluated);

  std::sort(result.records.begin(), result.records.end(),
            [](const RegretRecord& a, const RegretRecord& b) { return a.request.id < b.request.id; });
  return result;
}

// Collect per-edge (s_hat, p_hat, sigma_hat, actual) observations across the
// Top-K candidates of each request; feeds build_training_set.
inline EopfHistory collect_eopf_history(const RoadGraph& graph, const SpeedField& field,
                                        const FieldModel& speed_model,
                                        const FieldModel* congestion_model,
                                        const std::vector<NavRequest>& requests,
                                        const NavEvalConfig& config) {
  config.window.validate();
  detail::SnapshotCache cache(graph, field, speed_model, congestion_model, config.window);
  EopfHistory history;
  for (const NavRequest& req : requests) {
    if (!cache.in_range(req.timestep)) continue;
    cache.prepare(req.timestep);
    const auto candidates =
        yen_top_k(graph, req.origin, req.destination, config.k_paths, cache.predicted);
    std::vector<std::vector<EopfEdgeObs>> entry;
    entry.reserve(candidates.size());
    for (const auto& path : candidates) {
      std::vector<EopfEdgeObs> edges;
      edges.reserve(path.edges.size());
      for (int ei : path.edges) {
        const int road = graph.edges[ei].road;
        EopfEdgeObs obs;
        obs.s_hat = cache.predicted[road];
        obs.p_hat = cache.phat[road];
        obs.sigma_hat = cache.sigma[road];
        obs.actual = cache.actual[road];
        edges.push_back(obs);
      }
      entry.push_back(std::move(edges));
    }
    history.push_back(std::move(entry));
  }
  return history;
}

// ---- single route query -------------------------------------------------------

enum class SpeedSource { Actual, Predicted, Eopf };

inline SpeedSource speed_source_from_string(std::string_view s) {
  if (s == "actual") return SpeedSource::Actual;
  if (s == "predicted") return SpeedSource::Predicted;
  if (s == "eopf") return SpeedSource::Eopf;
  throw std::invalid_argument("unknown speed source '" + std::string(s) +
                              "' (expected actual | predicted | eopf)");
}

struct RouteQuery {
  int origin = 0;
  int destination = 0;
  int k = 5;
  int timestep = 0;  // "now"
  SpeedSource source = SpeedSource::Predicted;
};

struct RouteQueryResult {
  std::vector<PathResult> paths;           // best first
  std::vector<double> congestion_probs;    // per path: product of edge p-hats
};

// Top-K routes priced on the requested speed source. The eopf tag re-orders
// the predicted candidates by corrected cost (ties keep the original rank).
inline RouteQueryResult route_query(const RoadGraph& graph, const SpeedField& field,
                                    const FieldModel& speed_model,
                                    const FieldModel* congestion_model, const MlpModel* eopf,
                                    const RouteQuery& query, const WindowSpec& window) {
  window.validate();
  detail::SnapshotCache cache(graph, field, speed_model, congestion_model, window);
  if (!cache.in_range(query.timestep))
    throw DataError("timestep " + std::to_string(query.timestep) +
                    " lacks a full window or a priced future step");
  cache.prepare(query.timestep);

  RouteQueryResult out;
  if (query.source == SpeedSource::Actual) {
    out.paths = yen_top_k(graph, query.origin, query.destination, query.k, cache.actual);
  } else {
    out.paths = yen_top_k(graph, query.origin, query.destination, query.k, cache.predicted);
    if (query.source == SpeedSource::Eopf) {
      if (!eopf) throw std::invalid_argument("eopf speed source needs a trained model");
      std::vector<std::pair<double, std::size_t>> order(out.paths.size());
      for (std::size_t c = 0; c < out.paths.size(); ++c) {
        const auto& path = out.paths[c];
        double cost = 0.0;
        for (int ei : path.edges) {
          const int road = graph.edges[ei].road;
          cost += graph.edges[ei].length /
                  corrected_speed(*eopf,
                                  EdgeFeatures{cache.predicted[road], cache.phat[road],
                                               cache.sigma[road]},
                                  static_cast<int>(path.edges.size()));
        }
        order[c] = {cost, c};
      }
      std::stable_sort(order.begin(), order.end());
      std::vector<PathResult> ranked;
      ranked.reserve(out.paths.size());
      for (const auto& [cost, c] : order) ranked.push_back(std::move(out.paths[c]));
      out.paths = std::move(ranked);
    }
  }
  for (const auto& path : out.paths) {
    std::vector<double> probs;
    probs.reserve(path.edges.size());
    for (int ei : path.edges) probs.push_back(cache.phat[graph.edges[ei].road]);
    out.congestion_probs.push_back(path_congestion_prob(probs));
  }
  return out;
}

// ---- horizon sweep and epoch curve ------------------------------------------

struct HorizonRow {
  int horizon_min = 0;
  double rmse = 0.0;
  double mae = 0.0;
  double acc = 0.0;
};

struct SweepConfig {
  int window_h = 11;
  double train_ratio = 0.8;
  BoostParams boost;
};

inline WindowSpec window_for_horizon(int horizon_min, int window_h, int step_minutes) {
  if (horizon_min <= 0 || horizon_min % step_minutes != 0)
    throw std::invalid_argument("horizon must be a positive multiple of step_minutes");
  return WindowSpec{window_h, window_h + horizon_min / step_minutes};
}

inline std::vector<HorizonRow> horizon_sweep(const SpeedField& field,
                                             std::span<const int> horizons_min,
                                             const SweepConfig& cfg) {
  std::vector<HorizonRow> rows;
  for (int horizon : horizons_min) {
    const WindowSpec spec = window_for_horizon(horizon, cfg.window_h, field.step_minutes);
    if (spec.d >= field.n_steps())
      throw DataError("horizon " + std::to_string(horizon) + "min exceeds the data span");
    std::vector<double> pred, actual;
    for (int r = 0; r < field.n_roads(); ++r) {
      auto split = split_train_test(make_windows(field, r, spec), cfg.train_ratio);
      const auto model = train_regressor(split.train, cfg.boost);
      for (const auto& s : split.test) {
        pred.push_back(model.predict(s.features));
        actual.push_back(s.target);
      }
    }
    rows.push_back(HorizonRow{horizon, rmse(pred, actual), mae(pred, actual), acc(pred, actual)});
  }
  return rows;
}

struct EpochCurveResult {
  std::vector<double> train_rmse;  // entry k = RMSE with k+1 trees
  std::vector<double> test_rmse;
  int plateau_round = 0;           // 1-based
};

inline EpochCurveResult epoch_curve(const SpeedField& field, const WindowSpec& spec,
                                    double train_ratio, const BoostParams& params) {
  if (params.rounds < 1) throw std::invalid_argument("epoch_curve needs rounds >= 1");
  const int m = params.rounds;
  std::vector<double> train_sq(m, 0.0), test_sq(m, 0.0);
  long n_train_total = 0, n_test_total = 0;

  for (int r = 0; r < field.n_roads(); ++r) {
    auto split = split_train_test(make_windows(field, r, spec), train_ratio);
    const auto model = train_regressor(split.train, params);
    auto accumulate = [&](const std::vector<WindowSample>& samples, std::vector<double>& sq) {
      for (const auto& s : samples) {
        double score = model.base_score;
        for (int k = 0; k < m; ++k) {
          score += model.params.eta * model.trees[k].eval(s.features);
          const double err = score - s.target;
          sq[k] += err * err;
        }
      }
    };
    accumulate(split.train, train_sq);
    accumulate(split.test, test_sq);
    n_train_total += static_cast<long>(split.train.size());
    n_test_total += static_cast<long>(split.test.size());
  }

  EpochCurveResult out;
  out.train_rmse.resize(m);
  out.test_rmse.resize(m);
  for (int k = 0; k < m; ++k) {
    out.train_rmse[k] = std::sqrt(train_sq[k] / static_cast<double>(n_train_total));
    out.test_rmse[k] = std::sqrt(test_sq[k] / static_cast<double>(n_test_total));
  }

  // plateau: first round whose best improvement over the next 10 rounds
  // falls below 0.1% relative
  out.plateau_round = m;
  for (int k = 0; k < m - 1; ++k) {
    double best_later = out.test_rmse[k];
    for (int q = k + 1; q <= std::min(k + 10, m - 1); ++q)
      best_later = std::min(best_later, out.test_rmse[q]);
    if (out.test_rmse[k] - best_later < 0.001 * out.test_rmse[k]) {
      out.plateau_round = k + 1;
      break;
    }
  }
  return out;
}

// ---- prediction-model comparison tables --------------------------------------

struct SpeedModelRow {
  std::string model;
  double rmse = 0.0;
  double mae = 0.0;
  double acc = 0.0;
};

struct CongestionModelRow {
  std::string model;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct PredictionEval {
  std::vector<SpeedModelRow> speed_rows;
  std::vector<CongestionModelRow> congestion_rows;
  std::optional<RocCurve> gbt_roc;
  double gbt_auc = 0.0;
  PerRoadMetrics per_road_gbt;
  std::vector<std::string> classifier_skipped_roads;
};

struct PredictionEvalConfig {
  WindowSpec window;
  double train_ratio = 0.8;
  BoostParams boost;
  int knn_k = 5;
  MlpParams mlp;             // pooled MLP baseline
  CongestionConfig congestion;
  bool with_mlp = true;
};

inline PredictionEval eval_prediction(const SpeedField& field, const PredictionEvalConfig& cfg) {
  PredictionEval out;

  // speed task: pooled test predictions across per-road models
  std::vector<double> actual_pool, ha_pool, knn_u_pool, knn_w_pool, gbt_pool;
  std::vector<std::vector<double>> mlp_features_train, mlp_features_test;
  std::vector<double> mlp_targets_train;

  for (int r = 0; r < field.n_roads(); ++r) {
    auto split = split_train_test(make_windows(field, r, cfg.window), cfg.train_ratio);
    const auto gbt = train_regressor(split.train, cfg.boost);
    const KnnParams knn_u{cfg.knn_k, KnnParams::Weighting::Uniform};
    const KnnParams knn_w{cfg.knn_k, KnnParams::Weighting::InverseDistance};

    std::vector<double> road_pred, road_actual;
    for (const auto& s : split.test) {
      actual_pool.push_back(s.target);
      ha_pool.push_back(history_average(s.features));
      knn_u_pool.push_back(knn_predict(split.train, knn_u, s.features));
      knn_w_pool.push_back(knn_predict(split.train, knn_w, s.features));
      const double g = gbt.predict(s.features);
      gbt_pool.push_back(g);
      road_pred.push_back(g);
      road_actual.push_back(s.target);
    }
    out.per_road_gbt.rmse.push_back(rmse(road_pred, road_actual));
    out.per_road_gbt.mae.push_back(mae(road_pred, road_actual));
    out.per_road_gbt.acc.push_back(acc(road_pred, road_actual));

    if (cfg.with_mlp) {
      for (const auto& s : split.train) {
        mlp_features_train.push_back(s.features);
        mlp_targets_train.push_back(s.target);
      }
      for (const auto& s : split.test) mlp_features_test.push_back(s.features);
    }
  }

  auto add_speed_row = [&](const std::string& name, const std::vector<double>& pred) {
    out.speed_rows.push_back(
        SpeedModelRow{name, rmse(pred, actual_pool), mae(pred, actual_pool), acc(pred, actual_pool)});
  };
  add_speed_row("HistoryAverage", ha_pool);
  add_speed_row("KNN-Uniform", knn_u_pool);
  add_speed_row("KNN-Weighted", knn_w_pool);
  if (cfg.with_mlp) {
    const auto mlp = train_mlp(mlp_features_train, mlp_targets_train, cfg.mlp);
    std::vector<double> mlp_pool;
    mlp_pool.reserve(mlp_features_test.size());
    for (const auto& f : mlp_features_test) mlp_pool.push_back(mlp.predict(f));
    add_speed_row("NeuralNetwork", mlp_pool);
  }
  add_speed_row("GBT", gbt_pool);

  // congestion task
  std::vector<std::uint8_t> cong_actual;
  std::vector<double> gbt_scores, knn_u_scores, knn_w_scores;
  std::vector<std::vector<double>> cong_mlp_train_x, cong_mlp_test_x;
  std::vector<double> cong_mlp_train_y;

  for (int r = 0; r < field.n_roads(); ++r) {
    auto samples = make_windows(field, r, cfg.window);
    const auto n_train = static_cast<std::size_t>(cfg.train_ratio * samples.size());
    const auto labels = label_congestion(
        field, r, cfg.congestion, IndexRange{0, static_cast<int>(n_train) + cfg.window.d});
    for (auto& s : samples) s.target = labels.labels[s.t + cfg.window.d];
    auto split = split_train_test(std::move(samples), cfg.train_ratio);

    std::optional<BoostedEnsemble> gbt;
    try {
      gbt = train_classifier(split.train, cfg.boost);
    } catch (const DataError&) {
      out.classifier_skipped_roads.push_back(field.road_ids[r]);
      continue;
    }
    const KnnParams knn_u{cfg.knn_k, KnnParams::Weighting::Uniform};
    const KnnParams knn_w{cfg.knn_k, KnnParams::Weighting::InverseDistance};
    for (const auto& s : split.test) {
      cong_actual.push_back(static_cast<std::uint8_t>(s.target));
      gbt_scores.push_back(gbt->predict_proba(s.features));
      knn_u_scores.push_back(knn_predict(split.train, knn_u, s.features));
      knn_w_scores.push_back(knn_predict(split.train, knn_w, s.features));
    }
    if (cfg.with_mlp) {
      for (const auto& s : split.train) {
        cong_mlp_train_x.push_back(s.features);
        cong_mlp_train_y.push_back(s.target);
      }
      for (const auto& s : split.test) cong_mlp_test_x.push_back(s.features);
    }
  }

  auto add_cong_row = [&](const std::string& name, const std::vector<double>& scores) {
    std::vector<std::uint8_t> pred(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) pred[i] = scores[i] >= 0.5 ? 1 : 0;
    const PrfResult prf = precision_recall_f1(pred, cong_actual);
    out.congestion_rows.push_back(CongestionModelRow{name, prf.precision, prf.recall, prf.f1});
  };
  if (!cong_actual.empty()) {
    add_cong_row("KNN-Uniform", knn_u_scores);
    add_cong_row("KNN-Weighted", knn_w_scores);
    if (cfg.with_mlp && !cong_mlp_train_x.empty()) {
      const auto mlp = train_mlp(cong_mlp_train_x, cong_mlp_train_y, cfg.mlp);
      std::vector<double> mlp_scores;
      mlp_scores.reserve(cong_mlp_test_x.size());
      for (const auto& f : cong_mlp_test_x) mlp_scores.push_back(mlp.predict(f));
      add_cong_row("NeuralNetwork", mlp_scores);
    }
    add_cong_row("GBT", gbt_scores);
    const bool both_classes =
        std::find(cong_actual.begin(), cong_actual.end(), 1) != cong_actual.end() &&
        std::find(cong_actual.begin(), cong_actual.end(), 0) != cong_actual.end();
    if (both_classes) {
      out.gbt_roc = roc_auc(gbt_scores, cong_actual);
      out.gbt_auc = out.gbt_roc->auc;
    }
  }
  return out;
}

}  // namespace tpnav

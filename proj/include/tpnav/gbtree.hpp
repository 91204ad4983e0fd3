#pragma once
// Gradient-boosted CART ensemble built on second-order statistics of the
// regularized objective: leaf weight w* = -G/(H+lambda), split gain
// 0.5*(GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)) - gamma. Exact greedy split
// search over midpoints between sorted distinct feature values.

#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>

#include "tpnav/windowing.hpp"

namespace tpnav {

struct BoostParams {
  int rounds = 50;
  int max_depth = 4;
  double lambda = 1.0;
  double gamma = 0.0;
  double eta = 0.3;
  int min_samples_leaf = 1;

  void validate() const {
    if (rounds < 0) throw std::invalid_argument("rounds must be >= 0");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (lambda < 0.0 || gamma < 0.0) throw std::invalid_argument("lambda/gamma must be >= 0");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0,1]");
    if (min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be >= 1");
  }
};

struct TreeNode {
  int feature = -1;        // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] < threshold
  int left = -1;
  int right = -1;
  double weight = 0.0;     // leaf output
  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double eval(std::span<const double> x) const {
    int i = 0;
    while (!nodes[i].is_leaf())
      i = x[nodes[i].feature] < nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].weight;
  }

  int leaf_index(std::span<const double> x) const {
    int i = 0;
    while (!nodes[i].is_leaf())
      i = x[nodes[i].feature] < nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return i;
  }

  int leaf_count() const {
    int count = 0;
    for (const auto& n : nodes) count += n.is_leaf();
    return count;
  }
};

enum class Objective { SquaredError, Logistic };

struct BoostedEnsemble {
  Objective objective = Objective::SquaredError;
  double base_score = 0.0;
  int n_features = 0;
  BoostParams params;
  std::vector<RegressionTree> trees;

  // base_score + eta * sum of tree outputs; raw log-odds for Logistic
  double predict(std::span<const double> features) const {
    return predict_partial(features, static_cast<int>(trees.size()));
  }

  double predict_partial(std::span<const double> features, int n_trees) const {
    if (static_cast<int>(features.size()) != n_features)
      throw std::invalid_argument("feature length mismatch: expected " +
                                  std::to_string(n_features));
    double score = base_score;
    for (int i = 0; i < n_trees; ++i) score += params.eta * trees[i].eval(features);
    return score;
  }

  double predict_proba(std::span<const double> features) const {
    if (objective != Objective::Logistic)
      throw std::invalid_argument("predict_proba requires a logistic-objective ensemble");
    return sigmoid(predict(features));
  }
};

namespace detail {

struct BoostData {
  int n = 0, f = 0;
  std::vector<double> x;  // row-major n*f
  std::vector<double> y;
  double at(int i, int j) const { return x[static_cast<std::size_t>(i) * f + j]; }
};

inline BoostData flatten(const std::vector<WindowSample>& samples) {
  if (samples.empty()) throw DataError("cannot train on an empty sample set");
  BoostData d;
  d.n = static_cast<int>(samples.size());
  d.f = static_cast<int>(samples.front().features.size());
  if (d.f == 0) throw std::invalid_argument("samples have no features");
  d.x.reserve(static_cast<std::size_t>(d.n) * d.f);
  d.y.reserve(d.n);
  for (const auto& s : samples) {
    if (static_cast<int>(s.features.size()) != d.f)
      throw std::invalid_argument("inconsistent feature lengths across samples");
    d.x.insert(d.x.end(), s.features.begin(), s.features.end());
    d.y.push_back(s.target);
  }
  return d;
}

struct SplitChoice {
  bool found = false;
  int feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

inline double leaf_objective(double g, double h, double lambda) { return g * g / (h + lambda); }

// Exact greedy search. Scanning features then thresholds in ascending order
// with a strict > comparison realizes the lowest-feature / lowest-threshold
// tie-break.
inline SplitChoice best_split(const BoostData& d, const std::vector<double>& grad,
                              const std::vector<double>& hess, const std::vector<int>& idx,
                              const BoostParams& p) {
  double g_total = 0.0, h_total = 0.0;
  for (int i : idx) {
    g_total += grad[i];
    h_total += hess[i];
  }
  const double parent = leaf_objective(g_total, h_total, p.lambda);

  SplitChoice best;
  std::vector<std::pair<double, int>> order(idx.size());
  for (int feat = 0; feat < d.f; ++feat) {
    for (std::size_t i = 0; i < idx.size(); ++i) order[i] = {d.at(idx[i], feat), idx[i]};
    std::sort(order.begin(), order.end());

    double g_left = 0.0, h_left = 0.0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      g_left += grad[order[i].second];
      h_left += hess[order[i].second];
      const double a = order[i].first, b = order[i + 1].first;
      if (a == b) continue;
      const double threshold = a + (b - a) * 0.5;
      if (!(a < threshold && threshold <= b)) continue;  // adjacent doubles collapse
      const int n_left = static_cast<int>(i) + 1;
      const int n_right = static_cast<int>(order.size()) - n_left;
      if (n_left < p.min_samples_leaf || n_right < p.min_samples_leaf) continue;
      const double gain = 0.5 * (leaf_objective(g_left, h_left, p.lambda) +
                                 leaf_objective(g_total - g_left, h_total - h_left, p.lambda) -
                                 parent) -
                          p.gamma;
      if (gain > best.gain) {  // strict: only positive gains, first of any tie wins
        best.found = true;
        best.feature = feat;
        best.threshold = threshold;
        best.gain = gain;
      }
    }
  }
  return best;
}

inline int build_node(RegressionTree& tree, const BoostData& d, const std::vector<double>& grad,
                      const std::vector<double>& hess, std::vector<int>& idx, int depth,
                      const BoostParams& p) {
  const int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();

  SplitChoice split;
  if (depth < p.max_depth && static_cast<int>(idx.size()) >= 2 * p.min_samples_leaf)
    split = best_split(d, grad, hess, idx, p);

  if (!split.found) {
    double g = 0.0, h = 0.0;
    for (int i : idx) {
      g += grad[i];
      h += hess[i];
    }
    tree.nodes[node_id].weight = -g / (h + p.lambda);
    return node_id;
  }

  std::vector<int> left_idx, right_idx;
  for (int i : idx)
    (d.at(i, split.feature) < split.threshold ? left_idx : right_idx).push_back(i);
  idx.clear();
  idx.shrink_to_fit();

  tree.nodes[node_id].feature = split.feature;
  tree.nodes[node_id].threshold = split.threshold;
  const int left = build_node(tree, d, grad, hess, left_idx, depth + 1, p);
  tree.nodes[node_id].left = left;
  const int right = build_node(tree, d, grad, hess, right_idx, depth + 1, p);
  tree.nodes[node_id].right = right;
  return node_id;
}

inline BoostedEnsemble boost(const BoostData& d, const BoostParams& p, Objective objective,
                             double base_score) {
  BoostedEnsemble model;
  model.objective = objective;
  model.base_score = base_score;
  model.n_features = d.f;
  model.params = p;

  std::vector<double> score(d.n, base_score);
  std::vector<double> grad(d.n), hess(d.n);
  for (int round = 0; round < p.rounds; ++round) {
    for (int i = 0; i < d.n; ++i) {
      if (objective == Objective::SquaredError) {
        grad[i] = score[i] - d.y[i];
        hess[i] = 1.0;
      } else {
        const double prob = sigmoid(score[i]);
        grad[i] = prob - d.y[i];
        hess[i] = prob * (1.0 - prob);
      }
    }
    RegressionTree tree;
    std::vector<int> idx(d.n);
    std::iota(idx.begin(), idx.end(), 0);
    build_node(tree, d, grad, hess, idx, 0, p);
    for (int i = 0; i < d.n; ++i)
      score[i] += p.eta * tree.eval(std::span<const double>(&d.x[static_cast<std::size_t>(i) * d.f],
                                                            static_cast<std::size_t>(d.f)));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace detail

inline BoostedEnsemble train_regressor(const std::vector<WindowSample>& train,
                                       const BoostParams& params) {
  params.validate();
  const auto data = detail::flatten(train);
  const double base = std::accumulate(data.y.begin(), data.y.end(), 0.0) / data.n;
  return detail::boost(data, params, Objective::SquaredError, base);
}

inline BoostedEnsemble train_classifier(const std::vector<WindowSample>& train,
                                        const BoostParams& params) {
  params.validate();
  const auto data = detail::flatten(train);
  long pos = 0;
  for (double y : data.y) {
    if (y != 0.0 && y != 1.0) throw std::invalid_argument("classifier targets must be 0 or 1");
    pos += y == 1.0;
  }
  const long neg = data.n - pos;
  if (pos == 0 || neg == 0)
    throw DataError("classifier training set has a single class; base log-odds undefined");
  const double base = std::log(static_cast<double>(pos) / static_cast<double>(neg));
  return detail::boost(data, params, Objective::Logistic, base);
}

// ---- serialization: versioned text, pre-order node list per tree ----

inline void save_ensemble(const BoostedEnsemble& m, std::ostream& out) {
  out << "tpnav-gbt 1\n";
  out << "objective " << (m.objective == Objective::SquaredError ? "squared_error" : "logistic")
      << "\n";
  out << "base_score " << format_double(m.base_score) << "\n";
  out << "eta " << format_double(m.params.eta) << "\n";
  out << "lambda " << format_double(m.params.lambda) << "\n";
  out << "gamma " << format_double(m.params.gamma) << "\n";
  out << "rounds " << m.params.rounds << "\n";
  out << "max_depth " << m.params.max_depth << "\n";
  out << "min_samples_leaf " << m.params.min_samples_leaf << "\n";
  out << "n_features " << m.n_features << "\n";
  out << "n_trees " << m.trees.size() << "\n";
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    out << "tree " << t << " " << m.trees[t].nodes.size() << "\n";
    for (const auto& n : m.trees[t].nodes) {
      if (n.is_leaf())
        out << "l " << format_double(n.weight) << "\n";
      else
        out << "s " << n.feature << " " << format_double(n.threshold) << " " << n.left << " "
            << n.right << "\n";
    }
  }
  out << "end\n";
}

namespace detail {
inline std::string expect_token(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw DataError(std::string("gbt model file truncated at ") + what);
  return tok;
}
inline void expect_keyword(std::istream& in, const char* kw) {
  if (expect_token(in, kw) != kw) throw DataError(std::string("gbt model file: expected ") + kw);
}
}  // namespace detail

inline BoostedEnsemble load_ensemble(std::istream& in) {
  using detail::expect_keyword;
  using detail::expect_token;
  expect_keyword(in, "tpnav-gbt");
  if (expect_token(in, "version") != "1") throw DataError("unsupported gbt model version");

  BoostedEnsemble m;
  expect_keyword(in, "objective");
  const std::string obj = expect_token(in, "objective value");
  if (obj == "squared_error")
    m.objective = Objective::SquaredError;
  else if (obj == "logistic")
    m.objective = Objective::Logistic;
  else
    throw DataError("unknown objective: " + obj);

  auto read_double = [&](const char* kw) {
    expect_keyword(in, kw);
    return std::strtod(expect_token(in, kw).c_str(), nullptr);
  };
  auto read_int = [&](const char* kw) {
    expect_keyword(in, kw);
    return std::stoi(expect_token(in, kw));
  };

  m.base_score = read_double("base_score");
  m.params.eta = read_double("eta");
  m.params.lambda = read_double("lambda");
  m.params.gamma = read_double("gamma");
  m.params.rounds = read_int("rounds");
  m.params.max_depth = read_int("max_depth");
  m.params.min_samples_leaf = read_int("min_samples_leaf");
  m.n_features = read_int("n_features");
  const int n_trees = read_int("n_trees");
  for (int t = 0; t < n_trees; ++t) {
    expect_keyword(in, "tree");
    if (std::stoi(expect_token(in, "tree index")) != t) throw DataError("gbt tree index mismatch");
    const int n_nodes = std::stoi(expect_token(in, "tree node count"));
    RegressionTree tree;
    for (int i = 0; i < n_nodes; ++i) {
      const std::string kind = expect_token(in, "node kind");
      TreeNode node;
      if (kind == "l") {
        node.weight = std::strtod(expect_token(in, "leaf weight").c_str(), nullptr);
      } else if (kind == "s") {
        node.feature = std::stoi(expect_token(in, "split feature"));
        node.threshold = std::strtod(expect_token(in, "split threshold").c_str(), nullptr);
        node.left = std::stoi(expect_token(in, "left child"));
        node.right = std::stoi(expect_token(in, "right child"));
      } else {
        throw DataError("gbt model file: unknown node kind '" + kind + "'");
      }
      tree.nodes.push_back(node);
    }
    m.trees.push_back(std::move(tree));
  }
  expect_keyword(in, "end");
  return m;
}

inline std::string ensemble_string(const BoostedEnsemble& m) {
  std::ostringstream os;
  save_ensemble(m, os);
  return os.str();
}

}  // namespace tpnav

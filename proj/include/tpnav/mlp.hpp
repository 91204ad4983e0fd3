#pragma once
// Two-hidden-layer sigmoid MLP trained by full-batch gradient descent on
// scaled MSE. Features are min-max scaled to [0,1], targets to [0.1, 0.9] so
// the sigmoid output layer never needs to saturate.

#include <array>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>

#include "tpnav/common.hpp"

namespace tpnav {

struct MlpParams {
  int hidden1 = 32;
  int hidden2 = 16;
  int epochs = 2000;
  double learning_rate = 1.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (hidden1 < 1 || hidden2 < 1) throw std::invalid_argument("hidden widths must be >= 1");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  }
};

// Weights for topology in -> h1 -> h2 -> 1, sigmoid on every layer.
struct MlpNet {
  std::array<int, 4> dims{};
  std::vector<std::vector<double>> w;  // w[l][out*dims[l]+in]
  std::vector<std::vector<double>> b;  // b[l][out]

  static MlpNet zeros(int in, int h1, int h2) {
    MlpNet net;
    net.dims = {in, h1, h2, 1};
    for (int l = 0; l < 3; ++l) {
      net.w.emplace_back(static_cast<std::size_t>(net.dims[l + 1]) * net.dims[l], 0.0);
      net.b.emplace_back(net.dims[l + 1], 0.0);
    }
    return net;
  }

  static MlpNet seeded(int in, int h1, int h2, std::uint64_t seed) {
    MlpNet net = zeros(in, h1, h2);
    Rng rng(seed);
    for (int l = 0; l < 3; ++l) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(net.dims[l]));
      for (auto& v : net.w[l]) v = rng.uniform(-scale, scale);
      for (auto& v : net.b[l]) v = rng.uniform(-0.1, 0.1);
    }
    return net;
  }

  // activations[0] = input, activations[3] = scalar output
  void forward_all(std::span<const double> x, std::array<std::vector<double>, 4>& acts) const {
    acts[0].assign(x.begin(), x.end());
    for (int l = 0; l < 3; ++l) {
      acts[l + 1].assign(dims[l + 1], 0.0);
      for (int o = 0; o < dims[l + 1]; ++o) {
        double z = b[l][o];
        const double* row = &w[l][static_cast<std::size_t>(o) * dims[l]];
        for (int i = 0; i < dims[l]; ++i) z += row[i] * acts[l][i];
        acts[l + 1][o] = sigmoid(z);
      }
    }
  }

  double forward(std::span<const double> x) const {
    std::array<std::vector<double>, 4> acts;
    forward_all(x, acts);
    return acts[3][0];
  }
};

struct MlpGradients {
  std::vector<std::vector<double>> w;
  std::vector<std::vector<double>> b;
  double loss = 0.0;  // mean squared error over the batch, scaled space
};

// Exact full-batch gradients of L = (1/B) sum (out - target)^2.
inline MlpGradients mlp_gradients(const MlpNet& net, const std::vector<std::vector<double>>& x,
                                  std::span<const double> y) {
  if (x.empty()) throw std::invalid_argument("mlp_gradients: empty batch");
  if (x.size() != y.size()) throw std::invalid_argument("mlp_gradients: batch size mismatch");

  MlpGradients g;
  for (int l = 0; l < 3; ++l) {
    g.w.emplace_back(net.w[l].size(), 0.0);
    g.b.emplace_back(net.b[l].size(), 0.0);
  }
  const double inv_batch = 1.0 / static_cast<double>(x.size());

  std::array<std::vector<double>, 4> acts;
  std::vector<double> delta, delta_prev;
  for (std::size_t s = 0; s < x.size(); ++s) {
    net.forward_all(x[s], acts);
    const double out = acts[3][0];
    const double err = out - y[s];
    g.loss += err * err * inv_batch;

    delta.assign(1, 2.0 * err * inv_batch * out * (1.0 - out));
    for (int l = 2; l >= 0; --l) {
      for (int o = 0; o < net.dims[l + 1]; ++o) {
        const double d = delta[o];
        g.b[l][o] += d;
        double* grow = &g.w[l][static_cast<std::size_t>(o) * net.dims[l]];
        for (int i = 0; i < net.dims[l]; ++i) grow[i] += d * acts[l][i];
      }
      if (l == 0) break;
      delta_prev.assign(net.dims[l], 0.0);
      for (int o = 0; o < net.dims[l + 1]; ++o) {
        const double d = delta[o];
        const double* row = &net.w[l][static_cast<std::size_t>(o) * net.dims[l]];
        for (int i = 0; i < net.dims[l]; ++i) delta_prev[i] += d * row[i];
      }
      for (int i = 0; i < net.dims[l]; ++i) delta_prev[i] *= acts[l][i] * (1.0 - acts[l][i]);
      delta = delta_prev;
    }
  }
  return g;
}

inline double mlp_loss(const MlpNet& net, const std::vector<std::vector<double>>& x,
                       std::span<const double> y) {
  double loss = 0.0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    const double err = net.forward(x[s]) - y[s];
    loss += err * err;
  }
  return loss / static_cast<double>(x.size());
}

struct MinMax {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate() const { return !(hi > lo); }
};

struct MlpModel {
  MlpNet net;
  std::vector<MinMax> feature_range;
  MinMax target_range;
  std::vector<double> loss_curve;  // scaled-space MSE, entry 0 is pre-training
  int degenerate_features = 0;     // constant features pinned to 0.5

  std::vector<double> scale_features(std::span<const double> raw) const {
    if (raw.size() != feature_range.size())
      throw std::invalid_argument("feature length mismatch: expected " +
                                  std::to_string(feature_range.size()));
    std::vector<double> scaled(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) {
      const auto& r = feature_range[j];
      scaled[j] = r.degenerate() ? 0.5 : (raw[j] - r.lo) / (r.hi - r.lo);
    }
    return scaled;
  }

  // Sigmoid output clamped to the scaled target band before unscaling, so
  // predictions always land inside the recorded target range.
  double predict(std::span<const double> raw) const {
    const double out = net.forward(scale_features(raw));
    if (target_range.degenerate()) return target_range.lo;
    const double s = std::min(std::max(out, 0.1), 0.9);
    return target_range.lo + (s - 0.1) / 0.8 * (target_range.hi - target_range.lo);
  }
};

// Full-batch descent; on a loss increase the step is retried with a halved
// learning rate, so the recorded trajectory is nonincreasing. Accepted steps
// let the rate drift back toward its initial value (bold-driver schedule).
inline MlpModel train_mlp(const std::vector<std::vector<double>>& x_raw,
                          std::span<const double> y_raw, const MlpParams& params) {
  params.validate();
  if (x_raw.empty()) throw DataError("cannot train MLP on an empty set");
  const std::size_t n_features = x_raw.front().size();
  for (const auto& row : x_raw)
    if (row.size() != n_features) throw std::invalid_argument("inconsistent feature lengths");

  MlpModel model;
  model.feature_range.resize(n_features);
  for (std::size_t j = 0; j < n_features; ++j) {
    MinMax r{x_raw.front()[j], x_raw.front()[j]};
    for (const auto& row : x_raw) {
      r.lo = std::min(r.lo, row[j]);
      r.hi = std::max(r.hi, row[j]);
    }
    model.feature_range[j] = r;
    model.degenerate_features += r.degenerate();
  }
  model.target_range = {y_raw[0], y_raw[0]};
  for (double y : y_raw) {
    model.target_range.lo = std::min(model.target_range.lo, y);
    model.target_range.hi = std::max(model.target_range.hi, y);
  }

  std::vector<std::vector<double>> x(x_raw.size());
  std::vector<double> y(y_raw.size());
  for (std::size_t s = 0; s < x_raw.size(); ++s) x[s] = model.scale_features(x_raw[s]);
  for (std::size_t s = 0; s < y_raw.size(); ++s) {
    const auto& r = model.target_range;
    y[s] = r.degenerate() ? 0.5 : 0.1 + 0.8 * (y_raw[s] - r.lo) / (r.hi - r.lo);
  }

  model.net = MlpNet::seeded(static_cast<int>(n_features), params.hidden1, params.hidden2,
                             params.seed);
  double lr = params.learning_rate;
  double loss = mlp_loss(model.net, x, y);
  model.loss_curve.push_back(loss);

  MlpNet candidate = model.net;
  MlpNet velocity = MlpNet::zeros(static_cast<int>(n_features), params.hidden1, params.hidden2);
  constexpr double momentum = 0.9;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const MlpGradients g = mlp_gradients(model.net, x, y);
    while (true) {
      candidate = model.net;
      for (int l = 0; l < 3; ++l) {
        for (std::size_t i = 0; i < candidate.w[l].size(); ++i) {
          velocity.w[l][i] = momentum * velocity.w[l][i] - lr * g.w[l][i];
          candidate.w[l][i] += velocity.w[l][i];
        }
        for (std::size_t i = 0; i < candidate.b[l].size(); ++i) {
          velocity.b[l][i] = momentum * velocity.b[l][i] - lr * g.b[l][i];
          candidate.b[l][i] += velocity.b[l][i];
        }
      }
      const double cand_loss = mlp_loss(candidate, x, y);
      if (cand_loss <= loss || lr < 1e-14) {
        model.net = candidate;
        loss = cand_loss;
        lr = std::min(lr * 1.1, params.learning_rate);
        break;
      }
      // reset the step: halve the rate, drop accumulated velocity
      lr *= 0.5;
      for (int l = 0; l < 3; ++l) {
        std::fill(velocity.w[l].begin(), velocity.w[l].end(), 0.0);
        std::fill(velocity.b[l].begin(), velocity.b[l].end(), 0.0);
      }
    }
    model.loss_curve.push_back(loss);
  }
  return model;
}

// ---- serialization ----

inline void save_mlp(const MlpModel& m, std::ostream& out) {
  out << "tpnav-mlp 1\n";
  out << "dims " << m.net.dims[0] << " " << m.net.dims[1] << " " << m.net.dims[2] << " "
      << m.net.dims[3] << "\n";
  out << "target_range " << format_double(m.target_range.lo) << " "
      << format_double(m.target_range.hi) << "\n";
  out << "feature_ranges " << m.feature_range.size() << "\n";
  for (const auto& r : m.feature_range)
    out << format_double(r.lo) << " " << format_double(r.hi) << "\n";
  for (int l = 0; l < 3; ++l) {
    out << "layer " << l << "\n";
    for (double v : m.net.w[l]) out << format_double(v) << "\n";
    for (double v : m.net.b[l]) out << format_double(v) << "\n";
  }
  out << "end\n";
}

inline MlpModel load_mlp(std::istream& in) {
  auto tok = [&](const char* what) {
    std::string t;
    if (!(in >> t)) throw DataError(std::string("mlp model file truncated at ") + what);
    return t;
  };
  auto expect = [&](const char* kw) {
    if (tok(kw) != kw) throw DataError(std::string("mlp model file: expected ") + kw);
  };
  auto num = [&](const char* what) { return std::strtod(tok(what).c_str(), nullptr); };

  expect("tpnav-mlp");
  if (tok("version") != "1") throw DataError("unsupported mlp model version");
  expect("dims");
  const int in_dim = std::stoi(tok("dims")), h1 = std::stoi(tok("dims")),
            h2 = std::stoi(tok("dims"));
  if (std::stoi(tok("dims")) != 1) throw DataError("mlp output dimension must be 1");

  MlpModel m;
  m.net = MlpNet::zeros(in_dim, h1, h2);
  expect("target_range");
  m.target_range.lo = num("target lo");
  m.target_range.hi = num("target hi");
  expect("feature_ranges");
  const int nf = std::stoi(tok("feature count"));
  if (nf != in_dim) throw DataError("mlp feature count does not match input dimension");
  m.feature_range.resize(nf);
  for (auto& r : m.feature_range) {
    r.lo = num("feature lo");
    r.hi = num("feature hi");
    m.degenerate_features += r.degenerate();
  }
  for (int l = 0; l < 3; ++l) {
    expect("layer");
    if (std::stoi(tok("layer index")) != l) throw DataError("mlp layer index mismatch");
    for (auto& v : m.net.w[l]) v = num("weight");
    for (auto& v : m.net.b[l]) v = num("bias");
  }
  expect("end");
  return m;
}

inline std::string mlp_string(const MlpModel& m) {
  std::ostringstream os;
  save_mlp(m, os);
  return os.str();
}

}  // namespace tpnav

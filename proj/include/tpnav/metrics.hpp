#pragma once
// Scalar evaluation metrics: RMSE, MAE, Acc, precision/recall/F1, ROC/AUC, Pearson.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "tpnav/common.hpp"

namespace tpnav {

namespace detail {
inline void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("metric inputs have different lengths");
  if (a.empty()) throw std::invalid_argument("metric inputs are empty");
}
}  // namespace detail

inline double rmse(std::span<const double> pred, std::span<const double> actual) {
  detail::check_pair(pred, actual);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - actual[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

inline double mae(std::span<const double> pred, std::span<const double> actual) {
  detail::check_pair(pred, actual);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - actual[i]);
  return acc / static_cast<double>(pred.size());
}

// Acc = 1 - ||pred - actual||_2 / ||actual||_2
inline double acc(std::span<const double> pred, std::span<const double> actual) {
  detail::check_pair(pred, actual);
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - actual[i];
    err += d * d;
    norm += actual[i] * actual[i];
  }
  if (norm == 0.0) throw DataError("acc undefined: actual vector has zero norm");
  return 1.0 - std::sqrt(err) / std::sqrt(norm);
}

struct PrfResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;  // false when TP+FP == 0
  bool recall_defined = true;     // false when TP+FN == 0
};

inline PrfResult precision_recall_f1(std::span<const std::uint8_t> pred,
                                     std::span<const std::uint8_t> actual) {
  if (pred.size() != actual.size()) throw std::invalid_argument("label vectors differ in length");
  if (pred.empty()) throw std::invalid_argument("label vectors are empty");
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] > 1 || actual[i] > 1) throw std::invalid_argument("labels must be binary");
    tp += pred[i] == 1 && actual[i] == 1;
    fp += pred[i] == 1 && actual[i] == 0;
    fn += pred[i] == 0 && actual[i] == 1;
  }
  PrfResult r;
  if (tp + fp == 0) {
    r.precision_defined = false;
  } else {
    r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  if (tp + fn == 0) {
    r.recall_defined = false;
  } else {
    r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (FPR, TPR), threshold descending
  double auc = 0.0;
};

// Threshold sweep over distinct scores (plus a +inf sentinel); score ties are
// grouped at one threshold. AUC by the trapezoid rule.
inline RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores/labels differ in length");
  long pos = 0, neg = 0;
  for (auto l : labels) {
    if (l > 1) throw std::invalid_argument("labels must be binary");
    (l == 1 ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) throw DataError("ROC undefined: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  long tp = 0, fp = 0;
  double auc_acc = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
    const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
    auc_acc += (fpr - prev_fpr) * (tpr + prev_tpr) * 0.5;
    curve.points.emplace_back(fpr, tpr);
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  curve.auc = auc_acc;
  return curve;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson inputs differ in length");
  if (x.size() < 2) throw std::invalid_argument("pearson needs at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("pearson undefined for constant input");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tpnav

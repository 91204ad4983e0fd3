#pragma once
// Frequency-domain analysis of speed series and the two usability factors.
//
// DFT sign convention: coeffs[k] = sum_t x_t * e^{+j t 2pi k / N}. The factors
// only consume magnitudes, so the sign matters only for stored spectra.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "tpnav/metrics.hpp"
#include "tpnav/speed_field.hpp"

namespace tpnav {

struct Spectrum {
  std::vector<std::complex<double>> coeffs;
  int size() const { return static_cast<int>(coeffs.size()); }
};

namespace detail {

inline std::vector<std::complex<double>> dft_direct(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = kTwoPi * static_cast<double>(t) * static_cast<double>(k) /
                           static_cast<double>(n);
      sum += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = sum;
  }
  return out;
}

// Iterative radix-2, twiddles carry the +j convention above.
inline std::vector<std::complex<double>> fft_radix2(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = x[i];

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = kTwoPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  return a;
}

}  // namespace detail

// Direct O(N^2) summation is the reference; power-of-two sizes take the
// radix-2 path (kept within 1e-9 of the reference by test).
inline Spectrum dft(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("dft of empty series");
  const std::size_t n = x.size();
  const bool pow2 = n >= 2 && (n & (n - 1)) == 0;
  Spectrum s;
  s.coeffs = pow2 ? detail::fft_radix2(x) : detail::dft_direct(x);
  return s;
}

// Low-frequency L1 mass fraction: ||coeffs[0..K]||_1 / ||coeffs[0..N-1]||_1,
// both ranges inclusive, L1 over complex magnitudes.
inline double sr_factor(std::span<const double> x, int k) {
  const int n = static_cast<int>(x.size());
  if (k < 1 || k >= n) throw std::invalid_argument("sr_factor needs 1 <= K < N");
  const Spectrum s = dft(x);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mag = std::abs(s.coeffs[i]);
    den += mag;
    if (i <= k) num += mag;
  }
  if (den == 0.0) throw DataError("sr_factor undefined for an all-zero series");
  return num / den;
}

// (K-th largest - K-th smallest) / mean
inline double bias_factor(std::span<const double> x, int k) {
  const int n = static_cast<int>(x.size());
  if (k < 1 || n < 2 * k) throw std::invalid_argument("bias_factor needs at least 2K entries");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  if (!(mean > 0.0)) throw DataError("bias_factor undefined for non-positive mean");
  return (sorted[n - k] - sorted[k - 1]) / mean;
}

struct PerRoadMetrics {
  std::vector<double> rmse;
  std::vector<double> mae;
  std::vector<double> acc;
};

struct UsabilityRow {
  std::string factor;  // "SR" or "Bias"
  int k = 0;
  double corr_rmse = 0.0;
  double corr_mae = 0.0;
  double corr_acc = 0.0;
};

// Pearson correlation of each factor against each per-road metric, one row
// per (factor, K).
inline std::vector<UsabilityRow> usability_study(const SpeedField& field,
                                                 const PerRoadMetrics& metrics,
                                                 std::span<const int> k_list) {
  const int n_roads = field.n_roads();
  if (n_roads < 3) throw DataError("usability study needs at least 3 roads");
  if (static_cast<int>(metrics.rmse.size()) != n_roads ||
      static_cast<int>(metrics.mae.size()) != n_roads ||
      static_cast<int>(metrics.acc.size()) != n_roads)
    throw std::invalid_argument("per-road metrics must cover every road");

  std::vector<UsabilityRow> rows;
  for (const std::string& factor : {std::string("SR"), std::string("Bias")}) {
    for (int k : k_list) {
      std::vector<double> values(n_roads);
      for (int r = 0; r < n_roads; ++r)
        values[r] = factor == "SR" ? sr_factor(field.speeds[r], k) : bias_factor(field.speeds[r], k);
      UsabilityRow row;
      row.factor = factor;
      row.k = k;
      row.corr_rmse = pearson(values, metrics.rmse);
      row.corr_mae = pearson(values, metrics.mae);
      row.corr_acc = pearson(values, metrics.acc);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace tpnav

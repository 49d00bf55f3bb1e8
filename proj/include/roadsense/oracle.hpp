#pragma once

// Reference implementations kept deliberately naive. They share only the
// result types with the production code and are used to cross-check it.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "roadsense/bump.hpp"
#include "roadsense/wavelet.hpp"

namespace roadsense::oracle {

/// Mother wavelet evaluated on the real line.
inline double haar_psi(double x) {
  if (x >= 0.0 && x < 0.5) return 1.0;
  if (x >= 0.5 && x < 1.0) return -1.0;
  return 0.0;
}

/// Sampled, unit-norm psi_{j,k}(n) = 2^{-j/2} psi(n / 2^j - k).
inline double haar_atom(std::size_t j, std::size_t k, std::size_t n) {
  const double scale = std::pow(2.0, static_cast<double>(j));
  return haar_psi(static_cast<double>(n) / scale - static_cast<double>(k)) / std::sqrt(scale);
}

/// d_{j,k} = sum_n x(n) psi_{j,k}(n), one inner product per coefficient.
inline WaveletCoeffs oracle_dwt(std::span<const double> x) {
  const std::size_t L = x.size();
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < L) ++levels;

  WaveletCoeffs w;
  double approx = 0.0;
  for (std::size_t n = 0; n < L; ++n) approx += x[n] / std::sqrt(static_cast<double>(L));
  w.approx = approx;
  w.details.resize(levels);
  for (std::size_t j = 1; j <= levels; ++j) {
    const std::size_t count = L >> j;
    for (std::size_t k = 0; k < count; ++k) {
      double d = 0.0;
      for (std::size_t n = 0; n < L; ++n) d += x[n] * haar_atom(j, k, n);
      w.details[j - 1].push_back(d);
    }
  }
  return w;
}

/// MATLAB-style findpeaks: strict local maxima, 1-based locations.
struct OraclePeaks {
  std::vector<double> pks;
  std::vector<double> locs;
};

inline OraclePeaks findpeaks(const std::vector<double>& v) {
  OraclePeaks out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] > v[i + 1]) {
      out.pks.push_back(v[i]);
      out.locs.push_back(static_cast<double>(i + 1));
    }
  }
  return out;
}

/// Line-by-line transcription of the Lipschitz estimate, including the scale
/// 3 branch whose result is not used.
inline LipschitzEstimate oracle_algorithm1(std::span<const double> a_rg_hat) {
  const double L = 32.0;
  const double levels = std::log2(L);
  // M = [4 7; 7 25]^-1 via the adjugate
  const double det = 4.0 * 25.0 - 7.0 * 7.0;
  const double M[2][2] = {{25.0 / det, -7.0 / det}, {-7.0 / det, 4.0 / det}};

  const WaveletCoeffs W = oracle_dwt(a_rg_hat);
  (void)levels;
  std::vector<double> d1, d2, d3;
  for (double v : W.details[0]) d1.push_back(std::fabs(v));
  for (double v : W.details[1]) d2.push_back(std::fabs(v));
  for (double v : W.details[2]) d3.push_back(std::fabs(v));

  const OraclePeaks p1 = findpeaks(d1);
  const OraclePeaks p2 = findpeaks(d2);
  const OraclePeaks p3 = findpeaks(d3);
  (void)p3;

  LipschitzEstimate est;
  double P1 = 0.0, P2 = 0.0, location = 0.0, normloc1 = 0.0;
  if (!p1.pks.empty()) {
    std::size_t I1 = 0;
    for (std::size_t i = 1; i < p1.pks.size(); ++i) {
      if (p1.pks[i] > p1.pks[I1]) I1 = i;
    }
    P1 = p1.pks[I1];
    location = p1.locs[I1];
    normloc1 = location / 16.0;
  }
  if (!p2.pks.empty() && !p1.pks.empty()) {
    std::vector<double> normloc3;
    for (double l2 : p2.locs) normloc3.push_back(l2 / 8.0 - normloc1);
    std::size_t I2 = 0;
    for (std::size_t i = 1; i < normloc3.size(); ++i) {
      if (std::fabs(normloc3[i]) < std::fabs(normloc3[I2])) I2 = i;
    }
    P2 = p2.pks[I2];

    est.beta_hat = M[1][0] * (std::log2(P1) + std::log2(P2)) + M[1][1] * 7.0 * (std::log2(P1) + std::log2(P2));
    est.p1 = P1;
    est.p2 = P2;
    est.loc = 2 * (static_cast<std::size_t>(location) - 1);
    est.valid = true;
  }
  return est;
}

}  // namespace roadsense::oracle

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "roadsense/error.hpp"
#include "roadsense/signal.hpp"

namespace roadsense {

/// Orthonormal Haar synthesis matrix. Column c holds basis vector c, so a
/// signal is x = B * w and its coefficients are w = B^T * x.
///
/// Coefficient order: index 0 is the scaling (approximation) vector, then
/// scales from coarsest (j = levels, one atom) down to finest (j = 1, L/2
/// atoms). Atom (j, k) is supported on [k 2^j, (k+1) 2^j) with value
/// +2^{-j/2} on the first half and -2^{-j/2} on the second.
struct HaarBasis {
  std::size_t size = 0;
  std::size_t levels = 0;
  std::vector<double> matrix;  // row-major size x size

  double at(std::size_t row, std::size_t col) const { return matrix[row * size + col]; }

  /// First coefficient index of scale j.
  std::size_t scale_offset(std::size_t j) const { return size >> j; }
  std::size_t scale_length(std::size_t j) const { return size >> j; }
};

/// Scaling coefficient plus per-scale details; details[j - 1] is scale j.
struct WaveletCoeffs {
  double approx = 0.0;
  std::vector<std::vector<double>> details;

  std::size_t levels() const { return details.size(); }
};

inline HaarBasis build_haar_basis(std::size_t length = kSegmentLength) {
  if (length < 2 || !std::has_single_bit(length)) {
    throw Error(ErrorCode::configuration, "Haar basis length must be a power of two >= 2");
  }
  HaarBasis b;
  b.size = length;
  b.levels = static_cast<std::size_t>(std::countr_zero(length));
  b.matrix.assign(length * length, 0.0);

  const double c0 = 1.0 / std::sqrt(static_cast<double>(length));
  for (std::size_t n = 0; n < length; ++n) b.matrix[n * length] = c0;

  for (std::size_t j = 1; j <= b.levels; ++j) {
    const std::size_t support = std::size_t{1} << j;
    const std::size_t half = support / 2;
    const double amp = 1.0 / std::sqrt(static_cast<double>(support));
    const std::size_t offset = b.scale_offset(j);
    for (std::size_t k = 0; k < b.scale_length(j); ++k) {
      const std::size_t col = offset + k;
      for (std::size_t n = 0; n < support; ++n) {
        b.matrix[(k * support + n) * length + col] = n < half ? amp : -amp;
      }
    }
  }
  return b;
}

/// Shared 32-point basis.
inline const HaarBasis& default_basis() {
  static const HaarBasis basis = build_haar_basis(kSegmentLength);
  return basis;
}

/// Reorders a flat coefficient vector into approx + per-scale details.
inline WaveletCoeffs partition_coeffs(std::span<const double> flat, const HaarBasis& basis) {
  WaveletCoeffs out;
  out.approx = flat[0];
  out.details.resize(basis.levels);
  for (std::size_t j = 1; j <= basis.levels; ++j) {
    const auto first = flat.begin() + static_cast<std::ptrdiff_t>(basis.scale_offset(j));
    out.details[j - 1].assign(first, first + static_cast<std::ptrdiff_t>(basis.scale_length(j)));
  }
  return out;
}

/// w = B^T x (B is orthonormal, so B^{-1} = B^T).
inline WaveletCoeffs dwt(std::span<const double> values, const HaarBasis& basis) {
  if (values.size() != basis.size) {
    throw Error(ErrorCode::shape, "segment length does not match the basis size");
  }
  const std::size_t L = basis.size;
  std::vector<double> flat(L, 0.0);
  for (std::size_t n = 0; n < L; ++n) {
    const double x = values[n];
    const double* row = &basis.matrix[n * L];
    for (std::size_t c = 0; c < L; ++c) flat[c] += row[c] * x;
  }
  return partition_coeffs(flat, basis);
}

inline WaveletCoeffs dwt(const Segment& segment, const HaarBasis& basis) {
  return dwt(std::span<const double>(segment.values), basis);
}

/// Inverse transform x = B w, mainly for round-trip checks.
inline std::vector<double> idwt(const WaveletCoeffs& coeffs, const HaarBasis& basis) {
  const std::size_t L = basis.size;
  std::vector<double> flat(L, 0.0);
  flat[0] = coeffs.approx;
  for (std::size_t j = 1; j <= basis.levels; ++j) {
    std::copy(coeffs.details[j - 1].begin(), coeffs.details[j - 1].end(),
              flat.begin() + static_cast<std::ptrdiff_t>(basis.scale_offset(j)));
  }
  std::vector<double> x(L, 0.0);
  for (std::size_t n = 0; n < L; ++n) {
    double acc = 0.0;
    for (std::size_t c = 0; c < L; ++c) acc += basis.at(n, c) * flat[c];
    x[n] = acc;
  }
  return x;
}

inline std::span<const double> detail_scale(const WaveletCoeffs& coeffs, std::size_t j) {
  if (j < 1 || j > coeffs.levels()) {
    throw Error(ErrorCode::index, "scale index out of range");
  }
  return coeffs.details[j - 1];
}

enum class PeakPolicy {
  strict,        // greater than both neighbours
  plateau_left,  // flat tops report their first index
};

struct Peaks {
  std::vector<double> values;
  std::vector<std::size_t> locs;

  bool empty() const { return values.empty(); }
};

/// Local maxima of a series. Endpoints are never peaks.
inline Peaks find_peaks(std::span<const double> series, PeakPolicy policy = PeakPolicy::strict) {
  Peaks p;
  const std::size_t n = series.size();
  if (n < 3) return p;
  for (std::size_t i = 1; i + 1 < n;) {
    if (!(series[i] > series[i - 1])) {
      ++i;
      continue;
    }
    if (series[i] > series[i + 1]) {
      p.values.push_back(series[i]);
      p.locs.push_back(i);
      ++i;
      continue;
    }
    if (policy == PeakPolicy::plateau_left && series[i] == series[i + 1]) {
      std::size_t e = i + 1;
      while (e + 1 < n && series[e + 1] == series[i]) ++e;
      if (e + 1 < n && series[e + 1] < series[i]) {
        p.values.push_back(series[i]);
        p.locs.push_back(i);
      }
      i = e + 1;
      continue;
    }
    ++i;
  }
  return p;
}

}  // namespace roadsense

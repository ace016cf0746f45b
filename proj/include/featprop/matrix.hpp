#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "featprop/error.hpp"

namespace featprop {

// Dense row-major node-by-channel matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double* row(std::size_t r) { return values.data() + r * cols; }
  const double* row(std::size_t r) const { return values.data() + r * cols; }
};

// true = entry observed
struct KnownMask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> known;

  KnownMask() = default;
  KnownMask(std::size_t r, std::size_t c, bool value = false)
      : rows(r), cols(c), known(r * c, value ? 1 : 0) {}

  bool operator()(std::size_t r, std::size_t c) const { return known[r * cols + c] != 0; }
  void set(std::size_t r, std::size_t c, bool value) { known[r * cols + c] = value ? 1 : 0; }
};

inline void require_shape(const FeatureMatrix& x, std::size_t rows, std::size_t cols,
                          const char* what) {
  if (x.rows != rows || x.cols != cols)
    throw InputError(std::string(what) + ": shape mismatch");
}

inline void require_mask_shape(const KnownMask& m, std::size_t rows, std::size_t cols,
                               const char* what) {
  if (m.rows != rows || m.cols != cols)
    throw InputError(std::string(what) + ": mask shape mismatch");
}

inline double frobenius_norm(const FeatureMatrix& x) {
  double s = 0.0;
  for (double v : x.values) s += v * v;
  return std::sqrt(s);
}

inline double frobenius_diff(const FeatureMatrix& a, const FeatureMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double max_abs_diff(const FeatureMatrix& a, const FeatureMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace featprop

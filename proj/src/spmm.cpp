#include "featprop/spmm.hpp"

#include <algorithm>
#include <cstdint>

namespace featprop {

namespace {

inline void check_dims(const Graph& g, const FeatureMatrix& x, const FeatureMatrix& out) {
  if (x.rows != g.num_nodes) throw InputError("spmm: feature row count != num_nodes");
  if (out.rows != x.rows || out.cols != x.cols)
    throw InputError("spmm: output shape mismatch");
  if (&out == &x) throw InputError("spmm: in-place call not supported");
}

inline void row_kernel(const Graph& g, const FeatureMatrix& x, FeatureMatrix& out,
                       std::size_t i) {
  const std::size_t d = x.cols;
  double* dst = out.row(i);
  std::fill(dst, dst + d, 0.0);
  const std::size_t begin = g.row_offsets[i], end = g.row_offsets[i + 1];
  for (std::size_t k = begin; k < end; ++k) {
    const double w = g.norm_weights[k];
    const double* src = x.row(g.col_indices[k]);
    for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
  }
}

}  // namespace

void spmm_into(const Graph& g, const FeatureMatrix& x, FeatureMatrix& out) {
  check_dims(g, x, out);
  const std::int64_t n = static_cast<std::int64_t>(g.num_nodes);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) row_kernel(g, x, out, static_cast<std::size_t>(i));
}

FeatureMatrix spmm(const Graph& g, const FeatureMatrix& x) {
  FeatureMatrix out(x.rows, x.cols);
  spmm_into(g, x, out);
  return out;
}

void spmm_serial_into(const Graph& g, const FeatureMatrix& x, FeatureMatrix& out) {
  check_dims(g, x, out);
  for (std::size_t i = 0; i < g.num_nodes; ++i) row_kernel(g, x, out, i);
}

FeatureMatrix spmm_serial(const Graph& g, const FeatureMatrix& x) {
  FeatureMatrix out(x.rows, x.cols);
  spmm_serial_into(g, x, out);
  return out;
}

}  // namespace featprop

#include "featprop/baselines.hpp"

#include <algorithm>

#include "featprop/rng.hpp"
#include "featprop/spmm.hpp"

namespace featprop {

FeatureMatrix zero_fill(const FeatureMatrix& x, const KnownMask& m) {
  require_mask_shape(m, x.rows, x.cols, "zero_fill");
  FeatureMatrix out = x;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t c = 0; c < x.cols; ++c)
      if (!m(i, c)) out(i, c) = 0.0;
  return out;
}

FeatureMatrix random_fill(const FeatureMatrix& x, const KnownMask& m, std::uint64_t seed) {
  require_mask_shape(m, x.rows, x.cols, "random_fill");
  FeatureMatrix out = x;
  Rng rng(seed);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t c = 0; c < x.cols; ++c)
      if (!m(i, c)) out(i, c) = rng.normal();
  return out;
}

FeatureMatrix global_mean_fill(const FeatureMatrix& x, const KnownMask& m,
                               std::vector<std::size_t>* warn_channels) {
  require_mask_shape(m, x.rows, x.cols, "global_mean_fill");
  std::vector<double> sum(x.cols, 0.0);
  std::vector<std::size_t> cnt(x.cols, 0);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t c = 0; c < x.cols; ++c)
      if (m(i, c)) {
        sum[c] += x(i, c);
        ++cnt[c];
      }
  std::vector<double> fill(x.cols, 0.0);
  for (std::size_t c = 0; c < x.cols; ++c) {
    if (cnt[c] > 0) {
      fill[c] = sum[c] / static_cast<double>(cnt[c]);
    } else if (warn_channels) {
      warn_channels->push_back(c);
    }
  }
  FeatureMatrix out = x;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t c = 0; c < x.cols; ++c)
      if (!m(i, c)) out(i, c) = fill[c];
  return out;
}

FeatureMatrix neighbor_mean_fill(const Graph& g, const FeatureMatrix& x, const KnownMask& m) {
  if (x.rows != g.num_nodes) throw InputError("neighbor_mean_fill: row count != num_nodes");
  require_mask_shape(m, x.rows, x.cols, "neighbor_mean_fill");
  FeatureMatrix out = x;
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t c = 0; c < x.cols; ++c) {
      if (m(i, c)) continue;
      double sum = 0.0;
      std::size_t cnt = 0;
      for (NodeId j : g.neighbors(i)) {
        if (m(j, c)) {
          sum += x(j, c);
          ++cnt;
        }
      }
      out(i, c) = cnt > 0 ? sum / static_cast<double>(cnt) : 0.0;
    }
  }
  return out;
}

FeatureMatrix label_propagation(const Graph& g, const LabelVector& y, double alpha,
                                std::size_t iterations) {
  if (y.labels.size() != g.num_nodes)
    throw InputError("label_propagation: label count != num_nodes");
  if (alpha < 0.0 || alpha > 1.0) throw InputError("label_propagation: alpha outside [0,1]");
  if (y.num_classes <= 0) throw InputError("label_propagation: num_classes must be positive");

  const std::size_t k = static_cast<std::size_t>(y.num_classes);
  FeatureMatrix y0(g.num_nodes, k);
  bool any_labeled = false;
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    const int lab = y.labels[i];
    if (lab < -1 || lab >= y.num_classes)
      throw InputError("label_propagation: label out of range at node " + std::to_string(i));
    if (lab >= 0) {
      y0(i, static_cast<std::size_t>(lab)) = 1.0;
      any_labeled = true;
    }
  }
  if (!any_labeled) throw InputError("label_propagation: no labeled nodes");

  FeatureMatrix cur = y0;
  FeatureMatrix next(g.num_nodes, k);
  for (std::size_t it = 0; it < iterations; ++it) {
    spmm_into(g, cur, next);
    for (std::size_t i = 0; i < next.values.size(); ++i)
      next.values[i] = alpha * next.values[i] + (1.0 - alpha) * y0.values[i];
    std::swap(cur, next);
  }
  for (std::size_t i = 0; i < g.num_nodes; ++i)
    if (y.labels[i] >= 0)
      for (std::size_t c = 0; c < k; ++c) cur(i, c) = y0(i, c);
  return cur;
}

std::vector<int> predict_labels(const FeatureMatrix& scores) {
  std::vector<int> pred(scores.rows, 0);
  for (std::size_t i = 0; i < scores.rows; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.cols; ++c)
      if (scores(i, c) > scores(i, best)) best = c;
    pred[i] = static_cast<int>(best);
  }
  return pred;
}

}  // namespace featprop

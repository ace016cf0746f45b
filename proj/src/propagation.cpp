#include "featprop/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "featprop/energy.hpp"
#include "featprop/spmm.hpp"

namespace featprop {

FeatureMatrix initialize_unknown(const FeatureMatrix& x, const KnownMask& m, InitMode mode,
                                 std::vector<std::size_t>* warn_channels) {
  require_mask_shape(m, x.rows, x.cols, "initialize_unknown");
  FeatureMatrix out = x;
  if (mode == InitMode::kKeepInput) return out;

  std::vector<double> fill(x.cols, 0.0);
  if (mode == InitMode::kGlobalMean) {
    std::vector<double> sum(x.cols, 0.0);
    std::vector<std::size_t> cnt(x.cols, 0);
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t c = 0; c < x.cols; ++c)
        if (m(i, c)) {
          sum[c] += x(i, c);
          ++cnt[c];
        }
    for (std::size_t c = 0; c < x.cols; ++c) {
      if (cnt[c] > 0) {
        fill[c] = sum[c] / static_cast<double>(cnt[c]);
      } else if (warn_channels) {
        warn_channels->push_back(c);
      }
    }
  }
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t c = 0; c < x.cols; ++c)
      if (!m(i, c)) out(i, c) = fill[c];
  return out;
}

namespace {

void reset_known(FeatureMatrix& x, const KnownMask& m, const FeatureMatrix& originals) {
  for (std::size_t i = 0; i < x.rows; ++i) {
    double* dst = x.row(i);
    const double* src = originals.row(i);
    const std::uint8_t* k = m.known.data() + i * m.cols;
    for (std::size_t c = 0; c < x.cols; ++c)
      if (k[c]) dst[c] = src[c];
  }
}

}  // namespace

FeatureMatrix fp_step(const Graph& g, const FeatureMatrix& x, const KnownMask& m,
                      const FeatureMatrix& originals) {
  require_shape(originals, x.rows, x.cols, "fp_step");
  require_mask_shape(m, x.rows, x.cols, "fp_step");
  FeatureMatrix out = spmm(g, x);
  reset_known(out, m, originals);
  return out;
}

FeatureMatrix euler_step(const Graph& g, const FeatureMatrix& x, const KnownMask& m,
                         const FeatureMatrix& originals, double h) {
  if (h <= 0.0) throw InputError("euler_step: step size must be positive");
  require_shape(originals, x.rows, x.cols, "euler_step");
  require_mask_shape(m, x.rows, x.cols, "euler_step");
  FeatureMatrix out = spmm(g, x);
  if (h != 1.0) {
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = (1.0 - h) * x.values[i] + h * out.values[i];
  }
  reset_known(out, m, originals);
  return out;
}

std::pair<FeatureMatrix, ConvergenceTrace> feature_propagate(const Graph& g,
                                                             const FeatureMatrix& x,
                                                             const KnownMask& m,
                                                             const PropagationConfig& cfg) {
  if (x.rows != g.num_nodes) throw InputError("feature_propagate: row count != num_nodes");
  require_mask_shape(m, x.rows, x.cols, "feature_propagate");
  if (cfg.step_size <= 0.0 || cfg.step_size >= 2.0)
    throw InputError("feature_propagate: step size must lie in (0, 2)");
  if (cfg.tolerance < 0.0) throw InputError("feature_propagate: negative tolerance");

  const double h = cfg.step_size;
  FeatureMatrix cur = initialize_unknown(x, m, cfg.init);

  // Effective boundary: real known entries plus every entry in a
  // (component, channel) block that has no known value at all; the latter
  // stay pinned to their initialization (harmonic extension is undefined there).
  KnownMask eff = m;
  FeatureMatrix anchors = x;
  {
    const ComponentLabeling lab = connected_components(g);
    std::vector<std::uint8_t> has_known(lab.num_components * x.cols, 0);
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t c = 0; c < x.cols; ++c)
        if (m(i, c)) has_known[lab.component_id[i] * x.cols + c] = 1;
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t c = 0; c < x.cols; ++c)
        if (!m(i, c) && !has_known[lab.component_id[i] * x.cols + c]) {
          eff.set(i, c, true);
          anchors(i, c) = cur(i, c);
        }
  }

  ConvergenceTrace trace;
  if (cfg.record_energy) trace.energies.push_back(dirichlet_energy(g, cur));

  FeatureMatrix next(x.rows, x.cols);
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    spmm_into(g, cur, next);
    if (h != 1.0) {
      for (std::size_t i = 0; i < next.values.size(); ++i)
        next.values[i] = (1.0 - h) * cur.values[i] + h * next.values[i];
    }
    reset_known(next, eff, anchors);

    const double denom = std::max(frobenius_norm(cur), 1e-12);
    const double residual = frobenius_diff(next, cur) / denom;
    std::swap(cur, next);

    trace.residuals.push_back(residual);
    trace.final_residual = residual;
    trace.iterations = it + 1;
    if (cfg.record_energy) trace.energies.push_back(dirichlet_energy(g, cur));
    if (cfg.tolerance > 0.0 && residual < cfg.tolerance) break;
  }

  return {std::move(cur), std::move(trace)};
}

}  // namespace featprop

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "featprop/graph.hpp"
#include "featprop/matrix.hpp"

namespace featprop {

enum class InitMode { kZeros, kGlobalMean, kKeepInput };

struct PropagationConfig {
  std::size_t max_iterations = 40;
  double step_size = 1.0;     // must lie in (0, 2)
  double tolerance = 1e-6;    // relative Frobenius change; 0 disables early stop
  InitMode init = InitMode::kZeros;
  bool record_energy = false;
};

struct ConvergenceTrace {
  std::size_t iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residuals;                // one per iteration
  std::vector<std::vector<double>> energies;    // per-channel, index 0 = initial state
};

// Known entries kept; unknown entries set per mode. Channels with zero known
// entries under kGlobalMean fall back to 0 and are reported in warn_channels.
FeatureMatrix initialize_unknown(const FeatureMatrix& x, const KnownMask& m, InitMode mode,
                                 std::vector<std::size_t>* warn_channels = nullptr);

// One diffusion step x <- A~x followed by resetting known entries to originals.
FeatureMatrix fp_step(const Graph& g, const FeatureMatrix& x, const KnownMask& m,
                      const FeatureMatrix& originals);

// Explicit Euler step: unknown entries x_u <- (1-h) x_u + h (A~x)_u, known reset.
// h = 1 reduces to fp_step.
FeatureMatrix euler_step(const Graph& g, const FeatureMatrix& x, const KnownMask& m,
                         const FeatureMatrix& originals, double h);

// Iterates until max_iterations or relative Frobenius change < tolerance.
// Output known entries equal the input's known entries bitwise. Entries in
// (component, channel) blocks with no known value stay at their initialization.
std::pair<FeatureMatrix, ConvergenceTrace> feature_propagate(const Graph& g,
                                                             const FeatureMatrix& x,
                                                             const KnownMask& m,
                                                             const PropagationConfig& cfg);

}  // namespace featprop

#pragma once

#include <cstdint>
#include <vector>

#include "featprop/graph.hpp"
#include "featprop/matrix.hpp"

namespace featprop {

// -1 = unlabeled
struct LabelVector {
  std::vector<int> labels;
  int num_classes = 0;
};

// All fills preserve known entries bitwise.
FeatureMatrix zero_fill(const FeatureMatrix& x, const KnownMask& m);

// Unknown entries drawn iid N(0,1) from one seeded stream, visiting unknown
// entries in row-major order.
FeatureMatrix random_fill(const FeatureMatrix& x, const KnownMask& m, std::uint64_t seed);

FeatureMatrix global_mean_fill(const FeatureMatrix& x, const KnownMask& m,
                               std::vector<std::size_t>* warn_channels = nullptr);

// Unknown entry (i,c) <- unweighted mean of observed values of channel c over
// neighbors of i; zero when no neighbor observes the channel. Single pass.
FeatureMatrix neighbor_mean_fill(const Graph& g, const FeatureMatrix& x, const KnownMask& m);

// Y0 = one-hot labeled rows; Y <- alpha A~ Y + (1-alpha) Y0 for `iterations`
// steps, labeled rows reset to one-hot at the end. Returns class scores.
FeatureMatrix label_propagation(const Graph& g, const LabelVector& y, double alpha,
                                std::size_t iterations = 50);

// argmax per row, ties to the smallest class index.
std::vector<int> predict_labels(const FeatureMatrix& scores);

}  // namespace featprop

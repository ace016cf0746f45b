#pragma once

#include <vector>

#include "featprop/graph.hpp"
#include "featprop/matrix.hpp"

namespace featprop {

// Per-channel Dirichlet energy 1/2 x^T (I - A~) x, computed through spmm.
std::vector<double> dirichlet_energy(const Graph& g, const FeatureMatrix& x);

// max over unknown entries of |x - A~x|; 0 when every entry is known.
double fixed_point_residual(const Graph& g, const FeatureMatrix& x, const KnownMask& m);

}  // namespace featprop

#pragma once

#include "featprop/graph.hpp"
#include "featprop/matrix.hpp"

namespace featprop {

// out[i] = sum_j w(i,j) * x[j]. Rows of isolated nodes come out all-zero.
// OpenMP over rows, static schedule; each output cell is written by exactly
// one thread, so results are deterministic.
void spmm_into(const Graph& g, const FeatureMatrix& x, FeatureMatrix& out);
FeatureMatrix spmm(const Graph& g, const FeatureMatrix& x);

// Serial reference kernel, kept for testing and benchmarking.
void spmm_serial_into(const Graph& g, const FeatureMatrix& x, FeatureMatrix& out);
FeatureMatrix spmm_serial(const Graph& g, const FeatureMatrix& x);

}  // namespace featprop

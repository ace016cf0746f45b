#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "featprop/graph.hpp"
#include "featprop/matrix.hpp"

namespace featprop {

// Eigendecomposition of the normalized Laplacian I - A~. Eigenvalues ascend
// and lie in [0, 2]; eigenvector columns are orthonormal with the first
// nonzero entry of each made positive.
struct SpectralBasis {
  std::vector<double> eigenvalues;
  FeatureMatrix eigenvectors;  // n x n, column j = j-th eigenvector
};

// (component, channel) blocks that had no known entry and were filled with 0.
struct NoKnownBlock {
  std::size_t component;
  std::size_t channel;
};

// Dense per-component, per-channel harmonic interpolation: unknown entries
// solve D_uu x_u = A~_uk x_k. Intended as an oracle for n up to a few thousand.
FeatureMatrix closed_form_solve(const Graph& g, const FeatureMatrix& x, const KnownMask& m,
                                std::vector<NoKnownBlock>* warnings = nullptr);

// Same interpolation through the fixed-point form (I - A~_uu)^{-1} A~_uk x_k
// with an independent factorization; agrees with closed_form_solve to 1e-10.
FeatureMatrix steady_state(const Graph& g, const FeatureMatrix& x, const KnownMask& m);

// Spectral radius of the principal submatrix A~_uu. Dense eigensolve for small
// subsets, deterministic power iteration otherwise.
double spectral_radius_submatrix(const Graph& g, std::span<const NodeId> unknown_nodes);

SpectralBasis laplacian_eigendecomposition(const Graph& g);

// U^T X: per-channel coefficients ordered by ascending eigenvalue.
FeatureMatrix graph_fourier_transform(const SpectralBasis& basis, const FeatureMatrix& x);

// Channel-averaged |U^T x| per eigenvalue index.
std::vector<double> spectral_energy_profile(const SpectralBasis& basis,
                                            const FeatureMatrix& x);

}  // namespace featprop

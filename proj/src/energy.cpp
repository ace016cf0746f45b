#include "featprop/energy.hpp"

#include <cmath>

#include "featprop/spmm.hpp"

namespace featprop {

std::vector<double> dirichlet_energy(const Graph& g, const FeatureMatrix& x) {
  if (x.rows != g.num_nodes) throw InputError("dirichlet_energy: row count != num_nodes");
  const FeatureMatrix ax = spmm(g, x);
  std::vector<double> energy(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t c = 0; c < x.cols; ++c)
      energy[c] += x(i, c) * (x(i, c) - ax(i, c));
  for (double& e : energy) e *= 0.5;
  return energy;
}

double fixed_point_residual(const Graph& g, const FeatureMatrix& x, const KnownMask& m) {
  if (x.rows != g.num_nodes) throw InputError("fixed_point_residual: row count != num_nodes");
  require_mask_shape(m, x.rows, x.cols, "fixed_point_residual");
  const FeatureMatrix ax = spmm(g, x);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t c = 0; c < x.cols; ++c)
      if (!m(i, c)) worst = std::max(worst, std::abs(x(i, c) - ax(i, c)));
  return worst;
}

}  // namespace featprop

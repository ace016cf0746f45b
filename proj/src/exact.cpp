#include "featprop/exact.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "featprop/error.hpp"
#include "featprop/rng.hpp"

namespace featprop {

namespace {

// Dense A~ restricted to the given nodes (local index = position in nodes).
Eigen::MatrixXd dense_submatrix(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<std::int64_t> local(g.num_nodes, -1);
  for (std::size_t a = 0; a < nodes.size(); ++a) local[nodes[a]] = static_cast<std::int64_t>(a);
  Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(nodes.size(), nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const auto nbr = g.neighbors(nodes[a]);
    const auto wts = g.weights(nodes[a]);
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      const std::int64_t b = local[nbr[k]];
      if (b >= 0) sub(static_cast<Eigen::Index>(a), b) = wts[k];
    }
  }
  return sub;
}

std::vector<std::vector<NodeId>> component_node_lists(const Graph& g,
                                                      const ComponentLabeling& lab) {
  std::vector<std::vector<NodeId>> comp(lab.num_components);
  for (std::size_t i = 0; i < g.num_nodes; ++i)
    comp[lab.component_id[i]].push_back(static_cast<NodeId>(i));
  return comp;
}

enum class SolverKind { kLaplacianLdlt, kFixedPointLu };

FeatureMatrix harmonic_solve(const Graph& g, const FeatureMatrix& x, const KnownMask& m,
                             SolverKind kind, std::vector<NoKnownBlock>* warnings) {
  if (x.rows != g.num_nodes) throw InputError("closed_form_solve: row count != num_nodes");
  require_mask_shape(m, x.rows, x.cols, "closed_form_solve");

  FeatureMatrix out = x;
  const ComponentLabeling lab = connected_components(g);
  const auto comps = component_node_lists(g, lab);

  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& nodes = comps[ci];
    const Eigen::MatrixXd sub = dense_submatrix(g, nodes);

    for (std::size_t c = 0; c < x.cols; ++c) {
      std::vector<Eigen::Index> unknown, known;
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        if (m(nodes[a], c))
          known.push_back(static_cast<Eigen::Index>(a));
        else
          unknown.push_back(static_cast<Eigen::Index>(a));
      }
      if (unknown.empty()) continue;
      if (known.empty()) {
        for (Eigen::Index a : unknown) out(nodes[a], c) = 0.0;
        if (warnings) warnings->push_back({ci, c});
        continue;
      }

      const Eigen::Index b = static_cast<Eigen::Index>(unknown.size());
      Eigen::MatrixXd auu(b, b);
      for (Eigen::Index r = 0; r < b; ++r)
        for (Eigen::Index s = 0; s < b; ++s) auu(r, s) = sub(unknown[r], unknown[s]);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(b);
      for (Eigen::Index r = 0; r < b; ++r)
        for (Eigen::Index s : known)
          rhs(r) += sub(unknown[r], s) * x(nodes[s], c);

      const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(b, b) - auu;
      Eigen::VectorXd sol;
      if (kind == SolverKind::kLaplacianLdlt) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
        if (ldlt.info() != Eigen::Success)
          throw SolveError("closed_form_solve: LDLT failed on component " +
                           std::to_string(ci) + ", channel " + std::to_string(c));
        sol = ldlt.solve(rhs);
      } else {
        sol = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(rhs);
      }
      if (!sol.allFinite())
        throw SolveError("harmonic solve produced non-finite values (component " +
                         std::to_string(ci) + ", channel " + std::to_string(c) + ")");
      for (Eigen::Index r = 0; r < b; ++r) out(nodes[unknown[r]], c) = sol(r);
    }
  }
  return out;
}

}  // namespace

FeatureMatrix closed_form_solve(const Graph& g, const FeatureMatrix& x, const KnownMask& m,
                                std::vector<NoKnownBlock>* warnings) {
  return harmonic_solve(g, x, m, SolverKind::kLaplacianLdlt, warnings);
}

FeatureMatrix steady_state(const Graph& g, const FeatureMatrix& x, const KnownMask& m) {
  return harmonic_solve(g, x, m, SolverKind::kFixedPointLu, nullptr);
}

double spectral_radius_submatrix(const Graph& g, std::span<const NodeId> unknown_nodes) {
  if (unknown_nodes.empty()) throw InputError("spectral_radius_submatrix: empty subset");

  constexpr std::size_t kDenseCap = 1024;
  if (unknown_nodes.size() <= kDenseCap) {
    const Eigen::MatrixXd sub = dense_submatrix(g, unknown_nodes);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw SolveError("spectral_radius_submatrix: eigensolver did not converge");
    return std::max(std::abs(es.eigenvalues().minCoeff()),
                    std::abs(es.eigenvalues().maxCoeff()));
  }

  // Power iteration on A~_uu^2 (symmetric), sparse application through the CSR.
  const std::size_t b = unknown_nodes.size();
  std::vector<std::int64_t> local(g.num_nodes, -1);
  for (std::size_t a = 0; a < b; ++a) local[unknown_nodes[a]] = static_cast<std::int64_t>(a);
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (std::size_t a = 0; a < b; ++a) {
      const auto nbr = g.neighbors(unknown_nodes[a]);
      const auto wts = g.weights(unknown_nodes[a]);
      double acc = 0.0;
      for (std::size_t k = 0; k < nbr.size(); ++k) {
        const std::int64_t j = local[nbr[k]];
        if (j >= 0) acc += wts[k] * v[static_cast<std::size_t>(j)];
      }
      out[a] = acc;
    }
  };

  Rng rng(0x5eed5eedULL);
  std::vector<double> v(b), tmp(b), w(b);
  for (double& e : v) e = rng.normal();
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    apply(v, tmp);
    apply(tmp, w);
    double norm = 0.0;
    for (double e : w) norm += e * e;
    norm = std::sqrt(norm);
    if (norm < 1e-300) return 0.0;
    double rayleigh = 0.0;
    for (std::size_t a = 0; a < b; ++a) rayleigh += v[a] * w[a];
    for (std::size_t a = 0; a < b; ++a) v[a] = w[a] / norm;
    if (std::abs(rayleigh - lambda) < 1e-10 * std::max(1.0, std::abs(rayleigh))) {
      lambda = rayleigh;
      break;
    }
    lambda = rayleigh;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

SpectralBasis laplacian_eigendecomposition(const Graph& g) {
  const std::size_t n = g.num_nodes;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nbr = g.neighbors(i);
    const auto wts = g.weights(i);
    for (std::size_t k = 0; k < nbr.size(); ++k)
      lap(static_cast<Eigen::Index>(i), nbr[k]) -= wts[k];
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
  if (es.info() != Eigen::Success)
    throw SolveError("laplacian_eigendecomposition: eigensolver did not converge");

  SpectralBasis basis;
  basis.eigenvalues.resize(n);
  basis.eigenvectors = FeatureMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    basis.eigenvalues[j] = es.eigenvalues()(static_cast<Eigen::Index>(j));
    Eigen::VectorXd col = es.eigenvectors().col(static_cast<Eigen::Index>(j));
    // sign convention: first entry above noise made positive
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-12) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) basis.eigenvectors(i, j) = col(static_cast<Eigen::Index>(i));
  }
  return basis;
}

FeatureMatrix graph_fourier_transform(const SpectralBasis& basis, const FeatureMatrix& x) {
  const std::size_t n = basis.eigenvalues.size();
  require_shape(x, n, x.cols, "graph_fourier_transform");
  if (x.rows != n) throw InputError("graph_fourier_transform: shape mismatch");

  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> u(basis.eigenvectors.values.data(), n, n);
  Eigen::Map<const RowMat> xs(x.values.data(), n, x.cols);
  RowMat coeffs = u.transpose() * xs;

  FeatureMatrix out(n, x.cols);
  Eigen::Map<RowMat>(out.values.data(), n, x.cols) = coeffs;
  return out;
}

std::vector<double> spectral_energy_profile(const SpectralBasis& basis,
                                            const FeatureMatrix& x) {
  const FeatureMatrix coeffs = graph_fourier_transform(basis, x);
  std::vector<double> profile(coeffs.rows, 0.0);
  for (std::size_t i = 0; i < coeffs.rows; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < coeffs.cols; ++c) acc += std::abs(coeffs(i, c));
    profile[i] = acc / static_cast<double>(coeffs.cols);
  }
  return profile;
}

}  // namespace featprop

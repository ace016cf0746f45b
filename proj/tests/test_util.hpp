#pragma once

#include <cstdint>
#include <vector>

#include "featprop/eval.hpp"
#include "featprop/graph.hpp"
#include "featprop/matrix.hpp"
#include "featprop/rng.hpp"

namespace testutil {

using namespace featprop;

inline Graph triangle() { return build_graph({{0, 1}, {1, 2}, {0, 2}}, 3); }

inline Graph path3() { return build_graph({{0, 1}, {1, 2}}, 3); }

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i)
    e.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
  return build_graph(e, n);
}

// Erdos-Renyi, resampled until connected.
inline Graph random_connected_er(std::size_t n, Rng& rng, double extra_p = 0.0) {
  const double p = std::min(1.0, (std::log(static_cast<double>(n)) + 2.0) /
                                     static_cast<double>(n) + extra_p);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.uniform() < p)
          edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    Graph g = build_graph(edges, n);
    if (connected_components(g).num_components == 1) return g;
  }
  throw std::runtime_error("random_connected_er: could not draw a connected graph");
}

inline FeatureMatrix random_features(std::size_t n, std::size_t d, Rng& rng) {
  FeatureMatrix x(n, d);
  for (double& v : x.values) v = rng.normal();
  return x;
}

// Entrywise mask with the given known fraction; guarantees at least one known
// entry per channel.
inline KnownMask random_mask(std::size_t n, std::size_t d, double known_frac, Rng& rng) {
  KnownMask m(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c)
      if (rng.uniform() < known_frac) m.set(i, c, true);
  for (std::size_t c = 0; c < d; ++c) {
    bool any = false;
    for (std::size_t i = 0; i < n && !any; ++i) any = m(i, c);
    if (!any) m.set(rng.uniform_int(n), c, true);
  }
  return m;
}

}  // namespace testutil

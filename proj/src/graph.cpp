#include "featprop/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "featprop/error.hpp"

namespace featprop {

namespace {

// Path-compressing union-find.
struct UnionFind {
  std::vector<NodeId> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), NodeId{0});
  }

  NodeId find(NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(NodeId a, NodeId b) {
    NodeId ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
};

}  // namespace

Graph build_graph(const std::vector<Edge>& edges, std::size_t num_nodes) {
  for (const auto& [a, b] : edges) {
    if (a >= num_nodes || b >= num_nodes)
      throw InputError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                       ") out of range for " + std::to_string(num_nodes) + " nodes");
  }

  std::vector<std::vector<NodeId>> adj(num_nodes);
  for (const auto& [a, b] : edges) {
    if (a == b) continue;  // binary adjacency, zero diagonal
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }

  Graph g;
  g.num_nodes = num_nodes;
  g.degrees.resize(num_nodes);
  g.row_offsets.resize(num_nodes + 1, 0);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    g.degrees[i] = static_cast<double>(adj[i].size());
    g.row_offsets[i + 1] = g.row_offsets[i] + adj[i].size();
  }
  g.col_indices.reserve(g.row_offsets[num_nodes]);
  g.norm_weights.reserve(g.row_offsets[num_nodes]);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (NodeId j : adj[i]) {
      g.col_indices.push_back(j);
      g.norm_weights.push_back(1.0 / std::sqrt(g.degrees[i] * g.degrees[j]));
    }
  }
  return g;
}

std::vector<Edge> edge_dump(const Graph& g) {
  std::vector<Edge> out;
  out.reserve(g.num_edges());
  for (std::size_t i = 0; i < g.num_nodes; ++i)
    for (NodeId j : g.neighbors(i))
      if (j > i) out.emplace_back(static_cast<NodeId>(i), j);
  return out;
}

ComponentLabeling connected_components(const Graph& g) {
  UnionFind uf(g.num_nodes);
  for (std::size_t i = 0; i < g.num_nodes; ++i)
    for (NodeId j : g.neighbors(i))
      if (j > i) uf.unite(static_cast<NodeId>(i), j);

  ComponentLabeling lab;
  lab.component_id.assign(g.num_nodes, 0);
  constexpr NodeId kUnset = static_cast<NodeId>(-1);
  std::vector<NodeId> root_to_id(g.num_nodes, kUnset);
  NodeId next = 0;
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    NodeId r = uf.find(static_cast<NodeId>(i));
    if (root_to_id[r] == kUnset) root_to_id[r] = next++;
    lab.component_id[i] = root_to_id[r];
  }
  lab.num_components = next;
  return lab;
}

}  // namespace featprop

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace featprop {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Undirected graph in CSR form, edge weights symmetrically normalized:
// w(i,j) = 1/sqrt(d_i * d_j) for the binary adjacency. Immutable after
// construction and safe to share across threads.
struct Graph {
  std::size_t num_nodes = 0;
  std::vector<std::size_t> row_offsets;  // length num_nodes + 1
  std::vector<NodeId> col_indices;       // length 2 * num_edges, sorted per row
  std::vector<double> norm_weights;      // aligned with col_indices
  std::vector<double> degrees;           // raw adjacency row sums

  std::size_t num_edges() const { return col_indices.size() / 2; }

  std::span<const NodeId> neighbors(std::size_t i) const {
    return {col_indices.data() + row_offsets[i], row_offsets[i + 1] - row_offsets[i]};
  }
  std::span<const double> weights(std::size_t i) const {
    return {norm_weights.data() + row_offsets[i], row_offsets[i + 1] - row_offsets[i]};
  }
};

struct ComponentLabeling {
  std::vector<NodeId> component_id;  // contiguous 0..num_components-1
  std::size_t num_components = 0;
};

// Symmetrizes, deduplicates and drops self-loops. Indices must be < num_nodes.
Graph build_graph(const std::vector<Edge>& edges, std::size_t num_nodes);

// Each undirected edge once, as (min, max) pairs in ascending order.
std::vector<Edge> edge_dump(const Graph& g);

ComponentLabeling connected_components(const Graph& g);

}  // namespace featprop

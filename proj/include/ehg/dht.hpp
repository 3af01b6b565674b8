#pragma once

#include "ehg/graph.hpp"

// The dual transformation between a graph and its edge hypergraph, plus the
// line-graph construction it replaces (kept as the quadratic-cost baseline
// for the benchmarks).

namespace ehg {

struct LineGraph {
  std::size_t num_nodes = 0;       // edges of the source graph
  std::vector<Edge> edges;         // pairs of source edges sharing an endpoint
  Tensor node_features;            // m x d'
};

/// Edges become dual nodes, nodes become hyperedges. Features are shared,
/// not copied; the pair list is a positional reshape of the edge list
/// (pairs 2i and 2i+1 carry edge i's endpoints), so the whole transformation
/// is O(m).
DualHypergraph dht(const Graph& g);

/// Exact inverse of dht(): a pure reshape of the positional pair list.
/// Throws GraphError(NotTwoRegular) when the layout is not the 2-regular one
/// dht() produces.
Graph dht_inverse(const DualHypergraph& h);

/// Line graph of g: one node per edge, adjacency iff the edges share an
/// endpoint. Enumerates incident-edge pairs per node, cost sum_v deg(v)^2.
LineGraph line_graph(const Graph& g);

}  // namespace ehg

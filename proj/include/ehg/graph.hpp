#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ehg/tensor.hpp"

// Sparse triplet graph representation: node features X (n x d), an undirected
// edge list stored once per edge, and edge features E (m x d'). The dual
// hypergraph mirrors it with a positional (dual node, hyperedge) pair list.
// Dense incidence matrices exist only as test oracles; production paths stay
// on the sparse lists.

namespace ehg {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  bool operator==(const Edge&) const = default;
};

struct Graph {
  std::size_t num_nodes = 0;
  Tensor node_features;            // n x d
  std::vector<Edge> edges;         // m entries, stored once, u != v
  Tensor edge_features;            // m x d'
  std::optional<int> label;        // classification tasks

  std::size_t num_edges() const { return edges.size(); }
  std::size_t node_dim() const { return node_features.cols(); }
  std::size_t edge_dim() const { return edge_features.cols(); }
};

struct IncidencePair {
  std::size_t dual_node = 0;   // index of an edge of the source graph
  std::size_t hyperedge = 0;   // index of a node of the source graph
  bool operator==(const IncidencePair&) const = default;
};

/// Image of a graph under the dual transformation: edges become dual nodes,
/// nodes become hyperedges. 2-regular by construction: pairs 2i and 2i+1
/// belong to dual node i.
struct DualHypergraph {
  std::size_t num_dual_nodes = 0;      // m
  Tensor dual_node_features;           // m x d'
  std::vector<IncidencePair> incidence;  // 2m pairs, positional layout
  std::size_t num_hyperedges = 0;      // n
  Tensor hyperedge_features;           // n x d
};

/// Binary incidence matrix, rows = nodes, cols = edges.
struct DenseIncidence {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> m;  // row-major

  std::uint8_t at(std::size_t i, std::size_t j) const { return m[i * cols + j]; }
};

/// Checks every Graph invariant; throws GraphError with a distinct kind for
/// out-of-range endpoints, self-loops, duplicate undirected edges, and
/// feature shape mismatches.
void validate(const Graph& g);

DenseIncidence to_dense_incidence(const Graph& g);

std::vector<std::size_t> node_degrees(const Graph& g);

}  // namespace ehg

#pragma once

#include <cstdint>
#include <string>

#include "ehg/graph.hpp"

// Deterministic synthetic graph families and the JSON interchange format.
// Every generator is a pure function of its parameters and seed.

namespace ehg {

/// 2-D points on two interleaved arcs, undirected k-nearest-neighbor edges,
/// RGB edge features shared within spatial midpoint clusters (exactly
/// n_color_clusters distinct colors, all components in [0,1]).
Graph gen_clustered_edge_colors(std::size_t n_points, std::size_t k_neighbors,
                                std::size_t n_color_clusters, std::uint64_t seed);

/// Uniform simple graph with exactly m edges; node value in {0,1,2} one-hot
/// as node feature; edge feature one-hot over the 6 unordered value pairs.
Graph gen_erdos_renyi_paired(std::size_t n, std::size_t m, std::uint64_t seed);

/// Hub node 0 connected to n_leaves leaves.
Graph gen_star(std::size_t n_leaves);

/// Preferential attachment, 4 edges per arriving node.
Graph gen_scale_free(std::size_t n, std::uint64_t seed);

/// Cycle (m = n, label 1) or path (m = n-1, label 0).
Graph gen_cycle_or_path(std::size_t n, bool is_cycle);

/// Index of the unordered pair {a, b} of node values in {0,1,2}:
/// (0,0)=0 (0,1)=1 (0,2)=2 (1,1)=3 (1,2)=4 (2,2)=5.
std::size_t value_pair_category(std::size_t a, std::size_t b);

// --- JSON interchange --------------------------------------------------------
// Graph files: {"num_nodes", "node_features", "edges", "edge_features",
// optional "label"}. A missing feature key is accepted as a zero-width
// feature matrix. Numbers are written with 17 significant digits so
// read(write(g)) == g exactly; reads run validate(). The one lossy corner:
// an empty feature matrix serializes as [], so a 0 x d' matrix reads back
// as 0 x 0 (the schema's featureless convention).

Graph read_graph_json(const std::string& path);
void write_graph_json(const Graph& g, const std::string& path);

// Dual-hypergraph files mirror the graph schema: {"num_dual_nodes",
// "dual_node_features", "incidence", "num_hyperedges", "hyperedge_features"}.
DualHypergraph read_dual_json(const std::string& path);
void write_dual_json(const DualHypergraph& h, const std::string& path);

enum class GraphFileKind { Graph, Dual };
/// Peeks at a file to decide which of the two schemas it carries.
GraphFileKind probe_graph_json(const std::string& path);

}  // namespace ehg

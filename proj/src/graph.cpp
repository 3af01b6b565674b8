#include "ehg/graph.hpp"

#include <string>
#include <unordered_set>
#include <utility>

#include "ehg/error.hpp"

namespace ehg {

void validate(const Graph& g) {
  const std::size_t n = g.num_nodes;
  const std::size_t m = g.edges.size();

  if (g.node_features.defined() && g.node_features.rows() != n) {
    throw GraphError(GraphError::Kind::FeatureShapeMismatch,
                     "graph: node_features has " +
                         std::to_string(g.node_features.rows()) +
                         " rows for " + std::to_string(n) + " nodes");
  }
  if (!g.node_features.defined() && n > 0) {
    throw GraphError(GraphError::Kind::FeatureShapeMismatch,
                     "graph: node_features undefined");
  }
  if (g.edge_features.defined() && g.edge_features.rows() != m) {
    throw GraphError(GraphError::Kind::FeatureShapeMismatch,
                     "graph: edge_features has " +
                         std::to_string(g.edge_features.rows()) +
                         " rows for " + std::to_string(m) + " edges");
  }
  if (!g.edge_features.defined()) {
    throw GraphError(GraphError::Kind::FeatureShapeMismatch,
                     "graph: edge_features undefined");
  }

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  for (std::size_t i = 0; i < m; ++i) {
    const Edge& e = g.edges[i];
    if (e.u >= n || e.v >= n) {
      throw GraphError(GraphError::Kind::EndpointOutOfRange,
                       "graph: edge " + std::to_string(i) + " endpoint (" +
                           std::to_string(e.u) + ", " + std::to_string(e.v) +
                           ") out of range for " + std::to_string(n) + " nodes");
    }
    if (e.u == e.v) {
      throw GraphError(GraphError::Kind::SelfLoop,
                       "graph: edge " + std::to_string(i) + " is a self-loop on node " +
                           std::to_string(e.u));
    }
    auto [lo, hi] = std::minmax(e.u, e.v);
    const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) |
                              static_cast<std::uint64_t>(hi);
    if (!seen.insert(key).second) {
      throw GraphError(GraphError::Kind::DuplicateEdge,
                       "graph: duplicate undirected edge {" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "} at index " +
                           std::to_string(i));
    }
  }
}

DenseIncidence to_dense_incidence(const Graph& g) {
  validate(g);
  DenseIncidence inc;
  inc.rows = g.num_nodes;
  inc.cols = g.edges.size();
  inc.m.assign(inc.rows * inc.cols, 0);
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    inc.m[g.edges[j].u * inc.cols + j] = 1;
    inc.m[g.edges[j].v * inc.cols + j] = 1;
  }
  return inc;
}

std::vector<std::size_t> node_degrees(const Graph& g) {
  validate(g);
  std::vector<std::size_t> deg(g.num_nodes, 0);
  for (const Edge& e : g.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

}  // namespace ehg

#include "ehg/dht.hpp"

#include <string>

#include "ehg/error.hpp"

namespace ehg {

DualHypergraph dht(const Graph& g) {
  validate(g);
  DualHypergraph h;
  h.num_dual_nodes = g.edges.size();
  h.dual_node_features = g.edge_features;
  h.num_hyperedges = g.num_nodes;
  h.hyperedge_features = g.node_features;
  h.incidence.resize(2 * g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    h.incidence[2 * i] = {i, g.edges[i].u};
    h.incidence[2 * i + 1] = {i, g.edges[i].v};
  }
  return h;
}

Graph dht_inverse(const DualHypergraph& h) {
  const std::size_t m = h.num_dual_nodes;
  if (h.incidence.size() != 2 * m) {
    throw GraphError(GraphError::Kind::NotTwoRegular,
                     "dht_inverse: " + std::to_string(h.incidence.size()) +
                         " incidence pairs for " + std::to_string(m) +
                         " dual nodes (expected exactly 2 each)");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (h.incidence[2 * i].dual_node != i || h.incidence[2 * i + 1].dual_node != i) {
      throw GraphError(GraphError::Kind::NotTwoRegular,
                       "dht_inverse: pairs " + std::to_string(2 * i) + "/" +
                           std::to_string(2 * i + 1) +
                           " do not belong to dual node " + std::to_string(i));
    }
  }
  Graph g;
  g.num_nodes = h.num_hyperedges;
  g.node_features = h.hyperedge_features;
  g.edge_features = h.dual_node_features;
  g.edges.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    g.edges[i] = {h.incidence[2 * i].hyperedge, h.incidence[2 * i + 1].hyperedge};
  }
  validate(g);
  return g;
}

LineGraph line_graph(const Graph& g) {
  validate(g);
  LineGraph lg;
  lg.num_nodes = g.edges.size();
  lg.node_features = g.edge_features;

  // Incident edge ids per node, then all pairs at each node. Two distinct
  // edges of a simple graph share at most one endpoint, so every adjacent
  // pair is produced exactly once.
  std::vector<std::vector<std::size_t>> incident(g.num_nodes);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    incident[g.edges[i].u].push_back(i);
    incident[g.edges[i].v].push_back(i);
  }
  for (const auto& ids : incident) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        lg.edges.push_back({ids[a], ids[b]});
      }
    }
  }
  return lg;
}

}  // namespace ehg

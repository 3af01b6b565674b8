#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "ehg/graph.hpp"
#include "ehg/layers.hpp"
#include "ehg/tensor.hpp"

// Edge pooling on the dual hypergraph. HyperCluster coarsens edges through a
// row-stochastic assignment (E_pool = C^T E', soft incidence M_pool = M C);
// HyperDrop keeps the top-scored edges, gates their features with the scores
// so the score function stays on the gradient path, and never touches the
// node set.

namespace ehg {

struct ClusterAssignment {
  Tensor c;                   // m x m_pool, rows sum to 1
  bool overcomplete = false;  // m_pool > m (permitted, flagged)
};

/// Learnable linear map + row softmax over edge representations. The fixed
/// logit gain sharpens the initial assignments so the row-stochastic matrix
/// escapes its near-uniform start; with gain 1 the glorot-scaled logits sit
/// in a band where softmax is almost flat and the pooling path trains
/// an order of magnitude slower.
struct AssignmentGenerator {
  Tensor weight;  // d' x m_pool
  double logit_gain = 4.0;
  AssignmentGenerator() = default;
  AssignmentGenerator(std::size_t d_in, std::size_t m_pool, std::mt19937_64& rng,
                      double gain = 4.0);
  std::size_t m_pool() const { return weight.cols(); }
  std::vector<Tensor> params() const { return {weight}; }
};

ClusterAssignment make_assignment(const AssignmentGenerator& gen,
                                  const Tensor& e_repr);

struct ClusterPooledGraph {
  std::size_t num_nodes = 0;
  Tensor node_features;         // untouched
  Tensor pooled_edge_features;  // m_pool x d'
  Tensor soft_incidence;        // n x m_pool, real-valued
};

ClusterPooledGraph hypercluster(const Graph& g, const Tensor& e_repr,
                                const ClusterAssignment& assign);

/// Broadcast back: every edge receives its soft cluster mixture C E_pool.
Tensor hypercluster_unpool(const ClusterAssignment& assign,
                           const Tensor& pooled_edge_features);

/// tanh of a scalar edge-level pass on the dual hypergraph; every entry is
/// in (-1, 1).
struct ScoreLayer {
  EhgnnLayer inner;  // d' -> 1
  ScoreLayer() = default;
  ScoreLayer(std::size_t d_in, std::mt19937_64& rng) : inner(d_in, 1, rng) {}
  std::vector<Tensor> params() const { return inner.params(); }
};
Tensor hyperdrop_score(const ScoreLayer& layer, const Graph& g,
                       const Tensor& e_repr);

/// k = max(1, ceil(keep_ratio * m)) indices with the largest scores, ties
/// broken toward the smaller index, returned ascending.
std::vector<std::size_t> topk_select(const Tensor& scores, double keep_ratio);

struct DropPooledGraph {
  Graph base;                              // reduced edges, gated features
  std::vector<std::size_t> kept_indices;   // ascending
  Tensor kept_scores;                      // k x 1, on the gradient path
};

DropPooledGraph hyperdrop(const Graph& g, const Tensor& e_repr,
                          const Tensor& scores, double keep_ratio);

/// Node message passing over the reduced edge set with the surviving scores
/// reused as edge weights.
Tensor gcn_with_edge_weights(const GcnLayer& layer, const DropPooledGraph& pooled,
                             const Tensor& x);

}  // namespace ehg
